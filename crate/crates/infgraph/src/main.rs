fn main() {
    let (code, report) = infgraph::cli::run(std::env::args_os());
    if code == 1 {
        eprint!("{report}");
    } else {
        print!("{report}");
    }
    std::process::exit(code);
}
