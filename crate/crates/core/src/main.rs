fn main() { std::process::exit(bgrank::cli::main_with_args(std::env::args_os())); }
