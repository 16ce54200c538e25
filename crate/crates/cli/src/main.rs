use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use clap::Parser;
use surftop::{error_json, exit_code, render_json, run, svg, Cli, Command, Outcome, Verb};
use surftop_core::Error;

fn write_out(path: Option<&std::path::Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::IoError(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Sign decisions in an algebraic extension give up past a fixed precision
/// by panicking; that is the one case reported as `PrecisionExhausted`.
fn run_guarded(cmd: &Command) -> Result<Outcome, Error> {
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let r = panic::catch_unwind(AssertUnwindSafe(|| run(cmd)));
    panic::set_hook(hook);
    match r {
        Ok(r) => r,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            if msg.contains("undecided") {
                Err(Error::PrecisionExhausted(msg))
            } else {
                panic::resume_unwind(p)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if cli.verb == Verb::Plot && cli.svg.is_none() {
        eprintln!("surftop: plot needs --svg OUT");
        return ExitCode::from(1);
    }
    let result = Command::from_cli(&cli).and_then(|cmd| {
        let out = run_guarded(&cmd)?;
        if let (Some(path), Some(fig)) = (&cli.svg, &out.figure) {
            svg::emit_svg(fig, path)?;
        }
        write_out(cli.json.as_deref(), &render_json(&out.report))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("surftop: {e}");
            let _ = write_out(cli.json.as_deref(), &render_json(&error_json(&e)));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
