fn main() {
    let result = mudom::cli::run(std::env::args_os());
    let out = result.render();
    if result.exit_code() == 1 && matches!(result.payload, mudom::cli::Output::Text(_)) {
        eprint!("{out}");
    } else {
        print!("{out}");
        if !out.ends_with('\n') {
            println!();
        }
    }
    std::process::exit(result.exit_code());
}
