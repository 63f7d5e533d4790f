use std::process::ExitCode;

fn main() -> ExitCode {
    match skeinlab_cli::run_args(std::env::args_os()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) if e.code == skeinlab_cli::exit::OK => {
            print!("{}", e.message);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.render());
            ExitCode::from(e.code as u8)
        }
    }
}
