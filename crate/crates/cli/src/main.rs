use clap::Parser;
use perron_forge::args::Cli;

fn main() {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("PERRON_FORGE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match perron_forge::run(&cli) {
        Ok(out) => print!("{out}"),
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&e.diagnostic()).unwrap_or_default());
            std::process::exit(e.code());
        }
    }
}
