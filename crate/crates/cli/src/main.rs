fn main() {
    std::process::exit(catenoid_cli::cli_dispatch(std::env::args_os()));
}
