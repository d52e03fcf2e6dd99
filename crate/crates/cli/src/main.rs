fn main() {
    std::process::exit(pauli_lab::run(std::env::args_os()));
}
