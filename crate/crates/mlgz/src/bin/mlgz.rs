use mlgz::cli::cli_dispatch;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out = cli_dispatch(&args);
    print!("{}", out.stdout);
    std::process::exit(out.code);
}
