fn main() {
    std::process::exit(bibx_cli::run());
}
