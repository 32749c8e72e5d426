use clap::Parser;
use fadekit::cli::{run, RunConfig};

fn main() {
    if let Some(n) = std::env::var("FADEKIT_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // ignore the error if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cfg = RunConfig::parse();
    let outcome = run(&cfg);
    let text = outcome.render(cfg.format);
    if let Some(err) = outcome.report.get("error").and_then(|e| e.as_str()) {
        eprintln!("fadekit: {err}");
    }
    match &cfg.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("fadekit: cannot write {}: {e}", path.display());
                std::process::exit(2);
            }
        }
        None => print!("{text}"),
    }
    std::process::exit(outcome.code);
}
