use std::path::{Path, PathBuf};
use std::process::ExitCode;

use avglab::config;
use avglab::{bounds_report, dispatch, io, plot};

const USAGE: &str = "\
avglab - spectral simulator and bound calculator for fast-moving dissipative flows

USAGE:
  avglab run <config.json> [--out <dir>] [--seed <n>]   run the configured scenario
  avglab --bounds <config.json> [--out <dir>]           compute the bound report only
  avglab --plot <result.json>                           emit a gnuplot script for a result

Exit codes: 0 = all thresholds met, 1 = a threshold failed, 2 = bad config or runtime error.
Env: AVGLAB_THREADS caps worker parallelism for grid sweeps.
";

fn init_threads() {
    if let Ok(t) = std::env::var("AVGLAB_THREADS") {
        if let Ok(n) = t.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
}

fn load_validated(
    path: &Path,
    out_override: Option<String>,
    seed_override: Option<u64>,
) -> Result<config::Validated, i32> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        2
    })?;
    let mut cfg = match config::parse_config(&text) {
        Ok(c) => c,
        Err(errs) => {
            for e in errs {
                eprintln!("error: {e}");
            }
            return Err(2);
        }
    };
    if let Some(out) = out_override {
        cfg.out_dir = out;
    }
    if let Some(seed) = seed_override {
        cfg.seed = seed;
    }
    config::validate(&cfg).map_err(|errs| {
        for e in errs {
            eprintln!("error: {e}");
        }
        2
    })
}

fn main() -> ExitCode {
    init_threads();
    let args: Vec<String> = std::env::args().skip(1).collect();
    // collect --out / --seed from anywhere in the tail
    let mut positional: Vec<String> = Vec::new();
    let mut out_override: Option<String> = None;
    let mut seed_override: Option<u64> = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        match a.as_str() {
            "--out" => match it.next() {
                Some(v) => out_override = Some(v),
                None => {
                    eprintln!("error: --out needs a directory");
                    return ExitCode::from(2);
                }
            },
            "--seed" => match it.next().and_then(|v| v.parse::<u64>().ok()) {
                Some(v) => seed_override = Some(v),
                None => {
                    eprintln!("error: --seed needs an unsigned integer");
                    return ExitCode::from(2);
                }
            },
            _ => positional.push(a),
        }
    }
    let code = match positional.as_slice() {
        [cmd, path] if cmd == "run" => {
            match load_validated(Path::new(path), out_override, seed_override) {
                Ok(v) => dispatch(&v),
                Err(c) => c,
            }
        }
        [flag, path] if flag == "--bounds" => {
            match load_validated(Path::new(path), out_override, seed_override) {
                Ok(v) => match bounds_report::assemble(&v) {
                    Ok(rep) => {
                        let json = io::BoundsReportJson::from(&rep);
                        let out = PathBuf::from(&v.out_dir)
                            .join(format!("{}_bounds.json", v.scenario.name()));
                        if let Err(e) = io::write_json(&out, &json) {
                            eprintln!("error: cannot write {}: {e}", out.display());
                            return ExitCode::from(2);
                        }
                        println!("{}", serde_json::to_string_pretty(&json).unwrap());
                        0
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        2
                    }
                },
                Err(c) => c,
            }
        }
        [flag, path] if flag == "--plot" => match plot::emit_plot_script(Path::new(path)) {
            Ok(script) => {
                println!("wrote {}", script.display());
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        [flag] if flag == "--help" || flag == "-h" => {
            print!("{USAGE}");
            0
        }
        _ => {
            eprint!("{USAGE}");
            2
        }
    };
    ExitCode::from(code as u8)
}
