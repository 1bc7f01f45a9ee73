use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rm_srr::hypergraph::{build_hypergraph, induced_subgraph, EdgePolicy};
use rm_srr::limits::Limits;
use rm_srr::lp::matching_lp;
use rm_srr::recovery::{object_recovery_json, oracle_all_recovery_sets};
use rm_srr::rm::{generator_csv, generator_json, generator_matrix, row_labels, RmParams};
use rm_srr::srr::{membership, srr_report, DemandVector, Membership};
use rm_srr::verify::{run_suite, CheckStatus};
use rm_srr::Error;

/// Exact service rate region analysis for binary Reed-Muller codes.
#[derive(Parser)]
#[command(name = "rm-srr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the generator matrix of RM(r, m).
    Gen(Common),
    /// List recovery sets of one object, one order, or every object.
    Recovery {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        select: Select,
    },
    /// Print the recovery hypergraph, optionally restricted to some objects.
    Hypergraph {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        select: Select,
        /// Print the fractional matching LP instead of the graph.
        #[arg(long)]
        lp: bool,
    },
    /// Closed-form rate bounds, simplices and (oracle policy) nu*.
    Bounds(Common),
    /// Decide whether a demand vector lies in the service rate region.
    Check {
        #[command(flatten)]
        common: Common,
        /// File with k rates ("p/q" or decimals, comma or space separated);
        /// "-" reads stdin.
        lambda: Option<PathBuf>,
        /// Rates given inline instead of a file.
        #[arg(long, conflicts_with = "lambda")]
        rates: Option<String>,
    },
    /// Run the consistency check suite.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    #[arg(short = 'r')]
    r: u32,
    #[arg(short = 'm')]
    m: u32,
    #[arg(long, value_enum)]
    policy: Option<Policy>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Select {
    /// Object indices (1-based); repeatable.
    #[arg(short = 'j')]
    j: Vec<usize>,
    /// Restrict to objects of this order.
    #[arg(long)]
    order: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Oracle,
    Geometric,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = Result<String, Failure>;

impl Common {
    fn params(&self) -> Result<RmParams, Failure> {
        Ok(RmParams::new(self.r, self.m)?)
    }

    /// Explicit policy, else `fallback`; `None` as fallback means the
    /// oracle when it is within its ceiling and geometric otherwise.
    fn policy(&self, fallback: Option<EdgePolicy>) -> EdgePolicy {
        match self.policy {
            Some(Policy::Oracle) => EdgePolicy::Oracle,
            Some(Policy::Geometric) => EdgePolicy::Geometric,
            None => fallback.unwrap_or(if self.m <= Limits::from_env().max_m_oracle {
                EdgePolicy::Oracle
            } else {
                EdgePolicy::Geometric
            }),
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serialisable") + "\n"
}

fn selected(p: RmParams, select: &Select) -> Result<Vec<usize>, Failure> {
    let mut objects: Vec<usize> = if select.j.is_empty() {
        (1..=p.k()).collect()
    } else {
        select.j.clone()
    };
    for &j in &objects {
        if j == 0 || j > p.k() {
            return Err(Error::ObjectOutOfRange { j, k: p.k() }.into());
        }
    }
    if let Some(l) = select.order {
        let range = p.order_range(l)?;
        objects.retain(|j| range.contains(j));
    }
    objects.sort_unstable();
    objects.dedup();
    Ok(objects)
}

fn cmd_gen(c: &Common) -> Out {
    let p = c.params()?;
    if p.require_dual().is_err() {
        eprintln!("warning: {p} has no dual code (m < r + 1); dual-based commands will refuse it");
    }
    Ok(match c.format {
        Format::Json => pretty(&generator_json(p)),
        Format::Csv => generator_csv(p),
        Format::Table => {
            let labels = row_labels(p);
            let width = labels.iter().map(String::len).max().unwrap_or(1);
            let g = generator_matrix(p);
            let mut out = String::new();
            for (label, row) in labels.iter().zip(g.row_vectors()) {
                let bits: Vec<String> = row.to_bits().iter().map(u8::to_string).collect();
                writeln!(out, "{label:>width$} | {}", bits.join(" ")).unwrap();
            }
            out
        }
    })
}

fn join(cols: &[usize]) -> String {
    cols.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_recovery(c: &Common, select: &Select) -> Out {
    let p = c.params()?;
    let policy = c.policy(Some(EdgePolicy::Geometric));
    let mut reports = Vec::new();
    for j in selected(p, select)? {
        let oracle = match policy {
            EdgePolicy::Oracle => Some(oracle_all_recovery_sets(p, j)?),
            EdgePolicy::Geometric => None,
        };
        reports.push(object_recovery_json(p, j, oracle.as_deref())?);
    }
    Ok(match c.format {
        Format::Json if select.j.len() == 1 => pretty(&reports[0]),
        Format::Json => pretty(&reports),
        Format::Csv => {
            let mut out = String::from("object,kind,columns\n");
            for r in &reports {
                writeln!(out, "{},smallest,{}", r.object_index, join(&r.smallest)).unwrap();
                for s in &r.second_smallest {
                    writeln!(out, "{},second-smallest,{}", r.object_index, join(s)).unwrap();
                }
                for s in r.all_minimal.iter().flatten() {
                    writeln!(out, "{},minimal,{}", r.object_index, join(s)).unwrap();
                }
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            for r in &reports {
                writeln!(
                    out,
                    "e{} ({}, order {})",
                    r.object_index, r.monomial, r.order
                )
                .unwrap();
                writeln!(out, "  smallest        {{{}}}", join_comma(&r.smallest)).unwrap();
                for s in &r.second_smallest {
                    writeln!(out, "  second-smallest {{{}}}", join_comma(s)).unwrap();
                }
                writeln!(
                    out,
                    "  design          v={} k={} lambda={}",
                    r.design.v, r.design.k, r.design.lambda
                )
                .unwrap();
                if let Some(all) = &r.all_minimal {
                    writeln!(out, "  minimal sets    {}", all.len()).unwrap();
                    for s in all {
                        writeln!(out, "    {{{}}}", join_comma(s)).unwrap();
                    }
                }
            }
            out
        }
    })
}

fn join_comma(cols: &[usize]) -> String {
    cols.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_hypergraph(c: &Common, select: &Select, lp: bool) -> Out {
    let p = c.params()?;
    let g = build_hypergraph(p, c.policy(None))?;
    let g = if select.j.is_empty() && select.order.is_none() {
        g
    } else {
        induced_subgraph(&g, &selected(p, select)?)
    };
    if lp {
        return Ok(matching_lp(&g).to_text());
    }
    Ok(match c.format {
        Format::Json => pretty(&g.to_json()),
        Format::Csv => g.incidence_csv(),
        Format::Table => {
            let mut out = String::new();
            writeln!(
                out,
                "{p} {} hypergraph: {} vertices{}, {} edges",
                g.policy,
                g.vertex_count(),
                if g.has_auxiliary() {
                    " (with auxiliary)"
                } else {
                    ""
                },
                g.edges().len()
            )
            .unwrap();
            for e in g.edges() {
                let aux = if e.auxiliary { " + aux" } else { "" };
                writeln!(out, "  e{:<3} {{{}}}{aux}", e.label, join_comma(&e.servers)).unwrap();
            }
            out
        }
    })
}

fn cmd_bounds(c: &Common) -> Out {
    let p = c.params()?;
    let report = srr_report(p, c.policy(Some(EdgePolicy::Geometric)))?;
    Ok(match c.format {
        Format::Json => pretty(&report),
        Format::Csv => {
            let mut out = String::from("j,order,lambdaMax,numSecondSmallest,replication\n");
            for o in &report.per_object {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    o.j, o.order, o.lambda_max, o.num_second_smallest, o.replication
                )
                .unwrap();
            }
            out
        }
        Format::Table => {
            let mut out = format!("{p}\n  j  order  lambda_max\n");
            for o in &report.per_object {
                writeln!(out, "{:>3}  {:>5}  {}", o.j, o.order, o.lambda_max).unwrap();
            }
            for o in &report.per_order_bound {
                writeln!(
                    out,
                    "order {}: same-order sum <= {}, order <= {} sum <= {}",
                    o.order, o.same_order_bound, o.order, o.total_bound
                )
                .unwrap();
            }
            writeln!(out, "total sum <= {}", report.total_bound).unwrap();
            writeln!(
                out,
                "enclosing simplex: sum <= {}",
                report.simplices.omega.sum_bound
            )
            .unwrap();
            if let Some(nu) = &report.nu_star {
                writeln!(out, "nu* = {nu}").unwrap();
            }
            out
        }
    })
}

fn read_rates(lambda: Option<&PathBuf>, rates: Option<&str>) -> Result<String, Failure> {
    if let Some(r) = rates {
        return Ok(r.to_string());
    }
    let Some(path) = lambda else {
        return Err(Failure::Usage("check needs a rates file or --rates".into()));
    };
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn cmd_check(c: &Common, lambda: Option<&PathBuf>, rates: Option<&str>) -> Out {
    let p = c.params()?;
    let demand = DemandVector::parse(p, &read_rates(lambda, rates)?)?;
    let policy = c.policy(None);
    let verdict = membership(p, &demand, policy)?;
    let rates: Vec<String> = demand.rates().iter().map(|r| r.to_string()).collect();
    let body = match &verdict {
        Membership::Inside { allocation, exact } => json!({
            "params": p,
            "policy": policy,
            "lambda": rates,
            "verdict": "inside",
            "exact": exact,
            "allocation": allocation.to_json(),
        }),
        Membership::Outside { certificate, exact } => {
            let mut v = json!({
                "params": p,
                "policy": policy,
                "lambda": rates,
                "verdict": "outside",
                "exact": exact,
                "certificate": certificate.to_json(),
            });
            if !exact {
                v["note"] = Value::from(
                    "not achievable with smallest and second-smallest recovery sets only",
                );
            }
            v
        }
    };
    Ok(match c.format {
        Format::Json => pretty(&body),
        Format::Csv => {
            let mut out = String::from("object,servers,auxiliary,rate\n");
            match &verdict {
                Membership::Inside { allocation, .. } => {
                    for e in allocation.to_json() {
                        writeln!(
                            out,
                            "{},{},{},{}",
                            e.object,
                            join(&e.servers),
                            e.auxiliary,
                            e.rate
                        )
                        .unwrap();
                    }
                }
                Membership::Outside { .. } => out = "verdict\noutside\n".into(),
            }
            out
        }
        Format::Table => {
            let mut out = format!("{p} lambda = ({})\n", rates.join(", "));
            match &verdict {
                Membership::Inside { allocation, exact } => {
                    writeln!(out, "inside ({})", if *exact { "exact" } else { "sound" }).unwrap();
                    for e in allocation.to_json() {
                        writeln!(
                            out,
                            "  e{} {{{}}} <- {}",
                            e.object,
                            join_comma(&e.servers),
                            e.rate
                        )
                        .unwrap();
                    }
                }
                Membership::Outside { certificate, exact } => {
                    let kind = if *exact {
                        "exact"
                    } else {
                        "inner approximation only"
                    };
                    writeln!(
                        out,
                        "outside ({kind}), certificate margin {}",
                        certificate.margin
                    )
                    .unwrap();
                }
            }
            out
        }
    })
}

fn cmd_verify(c: &Common) -> Result<(String, bool), Failure> {
    let p = c.params()?;
    let report = run_suite(p)?;
    let text = match c.format {
        Format::Json => pretty(&report),
        Format::Csv => {
            let mut out = String::from("check,status,detail\n");
            for ch in &report.checks {
                let status = serde_json::to_value(ch.status).expect("status");
                let detail = ch.detail.replace('"', "'");
                writeln!(
                    out,
                    "{},{},\"{detail}\"",
                    ch.name,
                    status.as_str().unwrap_or("")
                )
                .unwrap();
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            for ch in &report.checks {
                let tag = match ch.status {
                    CheckStatus::Pass => "PASS",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Skipped => "SKIP",
                };
                writeln!(out, "{tag}  {:<40} {}", ch.name, ch.detail).unwrap();
            }
            if let Some(eq) = report.region_equals_achievable_simplex {
                writeln!(out, "region equals achievable simplex: {eq}").unwrap();
            }
            out
        }
    };
    Ok((text, report.passed))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let (text, ok, out) = match &cli.command {
        Command::Gen(c) => (cmd_gen(c)?, true, &c.out),
        Command::Recovery { common, select } => (cmd_recovery(common, select)?, true, &common.out),
        Command::Hypergraph { common, select, lp } => {
            (cmd_hypergraph(common, select, *lp)?, true, &common.out)
        }
        Command::Bounds(c) => (cmd_bounds(c)?, true, &c.out),
        Command::Check {
            common,
            lambda,
            rates,
        } => (
            cmd_check(common, lambda.as_ref(), rates.as_deref())?,
            true,
            &common.out,
        ),
        Command::Verify(c) => {
            let (text, ok) = cmd_verify(c)?;
            (text, ok, &c.out)
        }
    };
    emit(&text, out.as_ref())?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_capacity() { 2 } else { 1 })
        }
    }
}
