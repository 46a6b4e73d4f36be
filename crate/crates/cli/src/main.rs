fn main() {
    std::process::exit(descent_kit::run());
}
