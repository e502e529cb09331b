fn main() {
    let (code, out) = pretzel_kh::cli::run(std::env::args_os().skip(1));
    if !out.is_empty() {
        if code == 0 {
            println!("{out}");
        } else {
            eprintln!("{out}");
        }
    }
    std::process::exit(code);
}
