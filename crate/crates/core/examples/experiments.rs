//! Runs the scenarios of a config file and writes their reports.
//!
//! Run with `cargo run --example experiments -- [config] [out-dir]`; the
//! defaults are the bundled `hy_scaling.toml` and `out/`.

use std::path::PathBuf;

use pittlab::config::Config;
use pittlab::experiments::write_report;

fn main() -> pittlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/hy_scaling.toml"));
    let out = args.next().map(PathBuf::from);

    let cfg = Config::load(&config)?;
    let dir = out.unwrap_or_else(|| cfg.output.path.clone());
    for (name, scenario) in cfg.resolve()? {
        let report = scenario.run(&name)?;
        println!("{} {name}", report.status);
        for (k, v) in &report.metrics {
            println!("  {k} = {v:.6}");
        }
        for path in write_report(&report, &dir, &cfg.output.formats)? {
            println!("  wrote {}", path.display());
        }
    }
    Ok(())
}
