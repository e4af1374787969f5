//! Command-line surface for the kernel-matrix toolkit.
//!
//! Exit codes: 0 = all checks passed, 1 = a mathematical check failed or
//! a solve did not converge, 2 = usage or input error. Results go to
//! stdout, diagnostics to stderr. `WMM_DENSE_LIMIT` overrides the dense
//! materialization cap.

mod args;
mod cmds;

const USAGE: &str = "usage: wmm <command> [flags]

commands:
  bounds    norm / condition-number bound report for one kernel
  verify    run the full certification grid
  table1    Hadamard-inverse vs ordinary-inverse bound table (CSV)
  spectrum  eigenvalue localization report
  sinkhorn  entropic transport between two distribution files
  bench     wall-time the structured matvec or solve

run `wmm <command> --help` for the command's flags";

fn command_usage(cmd: &str) -> &'static str {
    match cmd {
        "bounds" => cmds::bounds::USAGE,
        "verify" => cmds::verify::USAGE,
        "table1" => cmds::table1::USAGE,
        "spectrum" => cmds::spectrum::USAGE,
        "sinkhorn" => cmds::sinkhorn::USAGE,
        "bench" => cmds::bench::USAGE,
        _ => USAGE,
    }
}

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let Some(cmd) = argv.first().map(String::as_str) else {
        eprintln!("{USAGE}");
        std::process::exit(2);
    };
    let rest = &argv[1..];
    if rest.iter().any(|t| t == "--help") || cmd == "--help" || cmd == "help" {
        println!("{}", command_usage(cmd));
        std::process::exit(0);
    }
    let result = match cmd {
        "bounds" => cmds::bounds::run(rest),
        "verify" => cmds::verify::run(rest),
        "table1" => cmds::table1::run(rest),
        "spectrum" => cmds::spectrum::run(rest),
        "sinkhorn" => cmds::sinkhorn::run(rest),
        "bench" => cmds::bench::run(rest),
        other => Err(format!("unknown command {other:?}\n{USAGE}")),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(message) => {
            eprintln!("error: {message}");
            eprintln!("usage: {}", command_usage(cmd));
            std::process::exit(2);
        }
    }
}
