use std::io;

fn main() {
    let args: Vec<std::ffi::OsString> = std::env::args_os().collect();
    let code = armine::cli::run(args, &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
