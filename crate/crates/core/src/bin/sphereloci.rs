use clap::Parser;

use sphereloci::cli::{run, Cli};
use sphereloci::Error;

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", report.stdout);
            for p in &report.written {
                eprintln!("wrote {}", p.display());
            }
            eprintln!("elapsed {:.3}s", report.elapsed.as_secs_f64());
        }
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, sphereloci::cli::CliError::Domain(Error::EmptyZeroSet)) {
                eprintln!("note: the locus does not meet the grid box at this resolution; try a larger --box or a finer --resolution");
            }
            std::process::exit(e.exit_code());
        }
    }
}
