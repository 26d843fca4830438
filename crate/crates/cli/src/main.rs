fn main() {
    let out = finspan_cli::run(std::env::args());
    print!("{}", out.stdout);
    std::process::exit(out.code);
}
