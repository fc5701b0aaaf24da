use std::io;
use std::process::ExitCode;
use std::thread;

use lamnorm::cli::{run, Io};

fn main() -> ExitCode {
    // Deep terms are dropped recursively; give the worker room for that.
    let worker = thread::Builder::new()
        .name("lamnorm".into())
        .stack_size(256 << 20)
        .spawn(|| {
            let stdin = io::stdin();
            let mut stdin = stdin.lock();
            let mut stdout = io::stdout().lock();
            let mut stderr = io::stderr().lock();
            run(std::env::args_os(), &mut Io { stdin: &mut stdin, stdout: &mut stdout, stderr: &mut stderr })
        })
        .expect("spawn worker thread");
    match worker.join() {
        Ok(code) => ExitCode::from(code as u8),
        Err(_) => ExitCode::from(101),
    }
}
