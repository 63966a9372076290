//! `omega`: run the Ω criteria and the circle-rotation simulator from the
//! command line.
//!
//! ```text
//! omega analyze      --theta FILE [--depth K] [--eps-grid LIST] [--window RHO]
//! omega kim-series   --theta FILE --psi FILE [--depth K] [--window RHO]
//! omega simulate     --theta FILE --psi FILE [--q0 N] [--q N] [--checkpoints LIST] [--samples N]
//! omega construct-psi (--remark-n LIST | --theta FILE --k-seq LIST [--depth K])
//! omega diagnostics  --theta FILE --psi FILE [--depth K] [--m-max M]
//! ```
//!
//! Every command also takes `--out DIR` (default `.`), `--format
//! csv|json-tree` (default `csv`) and `--seed N` (default 0).
//!
//! # Specification files
//!
//! One `key = value` per line, `#` comments, comma-separated lists.
//! Integers are arbitrary-precision decimals. θ files:
//!
//! | `kind`        | keys                                                        |
//! |---------------|-------------------------------------------------------------|
//! | `explicit`    | `explicit = a_0, a_1, …`                                    |
//! | `periodic`    | `preperiod`, `period`                                       |
//! | `e-pattern`   | none                                                        |
//! | `growth-rule` | `rule` (`liouville`, `q-power`, `log-q`, `index`), `prefix`, `exponent`, `max-bits` |
//!
//! ψ and φ files begin with `sequence = psi` or `sequence = phi`; see
//! `omega_core::specfile`. Commands that need φ accept a ψ file and use its
//! dual φ(q) = 1/(qψ(q)), and vice versa.
//!
//! # Outputs
//!
//! CSV files are comma-separated with LF line endings. They open with
//! `#` lines giving the tool version, the command, the configuration as
//! one JSON object and the seed, then a header row. With `--format
//! json-tree` each command writes one `<command>.json` holding the same
//! header fields and a `result` tree. Nothing else varies between runs:
//! identical invocations produce identical bytes.
//!
//! | command         | CSV files and columns                                                    |
//! |-----------------|--------------------------------------------------------------------------|
//! | `analyze`       | `analyze.csv`: `k, log_q`, then one column per statistic: `i`, `ii`, `iii`, `iv`, `v`, `condition-b[eps=…]` |
//! | `kim-series`    | `kim-series.csv`: `k, log_q, term, partial_sum`                         |
//! | `simulate`      | `simulate-profile.csv`: `Q, inner_measure, outer_measure, union_bound, measure`; `simulate-hits.csv`: `s, count, uncertain`; `simulate-hit-list.csv`: `s, q, distance, psi_q, margin, certain` |
//! | `construct-psi` | `construct-psi.spec`; `construct-psi-step.csv`: `breakpoint, value`; with `--remark-n` also `construct-psi-blocks.csv`: `k, start, end, sum, exact` and `construct-psi-minorant.csv`: `start, end, g` |
//! | `diagnostics`   | `diagnostics.csv`: `m, q_m, capped, ln_q_m, s_count, t_count, t_log_sum, numerator, kappa, lambda` |
//!
//! Target points `s` for `simulate` are drawn uniformly from `[0, 1)` by
//! ChaCha8 seeded with `--seed`.
//!
//! # Exit codes
//!
//! 0 success; 1 error (bad arguments, malformed specification, precision
//! failure); 2 inconclusive: `analyze` found no decisive verdict, or
//! `kim-series` could not fit a slope.

mod args;
mod run;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run::run(cli) {
        Ok(run::Status::Done) => ExitCode::SUCCESS,
        Ok(run::Status::Inconclusive) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
