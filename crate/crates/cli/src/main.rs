fn main() {
    std::process::exit(mublab::run(std::env::args_os()));
}
