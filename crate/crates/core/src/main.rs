use std::io::Write;

fn main() {
    let code = {
        let mut stdout = std::io::stdout().lock();
        let mut stderr = std::io::stderr().lock();
        let code = folia::cli::run(std::env::args_os(), &mut stdout, &mut stderr);
        let _ = stdout.flush();
        code
    };
    std::process::exit(code);
}
