//! Subcommand definitions and dispatch.

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sepbody_core::error::Error;
use sepbody_core::geometry::Vector;
use sepbody_core::poisson::{
    default_window_radius, run_replications, FunctionalEstimates, ProcessParams,
};
use sepbody_core::sepbody::{
    boundary_ray, ellipse_params, k_phi, m_value, psi_value, support_sepbody,
    support_sepbody_bisect, SeparationQuery,
};
use sepbody_core::verify::{
    check_conditional_representation, check_excess_volume_identity, check_support_bound,
    check_volume_bound, check_width_bound, CheckConfig, TheoremReport, Verdict,
    DEFAULT_CI_LEVEL,
};

use crate::config::{pick, pick_or, FileConfig};
use crate::io;
use crate::{EXIT_VERIFY_FAIL, EXIT_VERIFY_INCONCLUSIVE};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

#[derive(Parser, Debug)]
#[command(name = "sepbody", version, about = "Separation bodies of convex polytopes and K-cells of Poisson hyperplane processes")]
pub struct Cli {
    /// JSON config file; command-line flags override its entries
    #[arg(long, global = true)]
    pub config: Option<String>,
    /// Fix the rayon thread count (defaults to all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Body file: JSON {"vertices": [[x,y(,z)], ...]}
    #[arg(long)]
    pub body: Option<String>,
    /// Distribution: preset (axes2d, axes3d, sigma2d:<order>, sigma3d:<order>,
    /// facets:<bodyfile>) or a JSON file
    #[arg(long)]
    pub phi: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<String>,
    /// Output format for commands that support both
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Separating-hyperplane measure m(K, x) at a point
    Mfun {
        #[command(flatten)]
        common: CommonArgs,
        /// Query point, e.g. "2,0"
        #[arg(long)]
        point: Option<String>,
    },
    /// Minimum of m over a hyperplane, with the attaining point
    Psi {
        #[command(flatten)]
        common: CommonArgs,
        /// Hyperplane normal, e.g. "1,0"
        #[arg(long)]
        normal: Option<String>,
        /// Hyperplane offset
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Support function of the separation body K[phi, delta]
    SepbodySupport {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        delta: Option<f64>,
        /// Direction, e.g. "1,0"
        #[arg(long)]
        dir: Option<String>,
        /// lp (default), bisect, or both
        #[arg(long)]
        route: Option<String>,
    },
    /// Boundary polyline of the separation body as CSV (angle, x, y)
    SepbodyBoundary {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        delta: Option<f64>,
        /// Number of rays in the sweep
        #[arg(long)]
        rays: Option<usize>,
    },
    /// Supporting halfspaces of K_phi = K[phi, 0]
    Kphi {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Monte Carlo K-cell functionals (E h, E W, E V) with confidence intervals
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Process intensity (positive integer)
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Support probe directions, e.g. "1,0;0,1"
        #[arg(long)]
        probes: Option<String>,
        /// Write one JSON record per replication to this file
        #[arg(long)]
        dump: Option<String>,
        /// Window radius override
        #[arg(long)]
        window: Option<f64>,
    },
    /// Statistical checks of the expectation bounds and exact identities
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// thm31, thm32, thm33, eq313, conditional, or all
        #[arg(long)]
        check: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Probe direction for thm32 (defaults to the first atom)
        #[arg(long)]
        dir: Option<String>,
        /// Accepted-sample count for the conditional check
        #[arg(long)]
        accept: Option<usize>,
        /// Body label used in reports
        #[arg(long)]
        label: Option<String>,
    },
    /// Elliptic-arc parameters of one boundary region (2D, sigma quadrature)
    Ellipse {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        delta: Option<f64>,
        /// A point inside the region of interest, e.g. "3,0"
        #[arg(long)]
        point: Option<String>,
    },
}

pub fn run(cli: Cli) -> Result<i32, CliError> {
    let cfg = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(usage)?,
        None => FileConfig::default(),
    };
    #[cfg(feature = "parallel")]
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| usage(format!("cannot configure thread pool: {e}")))?;
    }
    let cfg_out = cfg.out.clone();
    let sink = |common: &CommonArgs| common.out.clone().or_else(|| cfg_out.clone());
    match cli.command {
        Command::Mfun { common, point } => {
            let (body, dist) = load_inputs(&common, &cfg)?;
            let point = io::parse_vector(&pick(&point, &cfg.point, "point").map_err(usage)?)
                .map_err(usage)?;
            let value = m_value(&body, &dist, &point);
            io::write_output(&sink(&common), &format!("{value}")).map_err(usage)?;
            Ok(0)
        }
        Command::Psi { common, normal, tau } => {
            let (body, dist) = load_inputs(&common, &cfg)?;
            let normal = io::parse_vector(&pick(&normal, &cfg.dir, "normal").map_err(usage)?)
                .map_err(usage)?;
            let tau = pick(&tau, &None, "tau").map_err(usage)?;
            let hp = sepbody_core::geometry::Hyperplane::new(&normal, tau)?;
            let res = psi_value(&hp, &body, &dist)?;
            let out = json!({"value": res.value, "minimizer": res.minimizer});
            io::write_output(&sink(&common), &serde_json::to_string_pretty(&out).unwrap())
                .map_err(usage)?;
            Ok(0)
        }
        Command::SepbodySupport {
            common,
            delta,
            dir,
            route,
        } => {
            let (body, dist) = load_inputs(&common, &cfg)?;
            let delta = pick(&delta, &cfg.delta, "delta").map_err(usage)?;
            let dir =
                io::parse_vector(&pick(&dir, &cfg.dir, "dir").map_err(usage)?).map_err(usage)?;
            let q = SeparationQuery::new(body, dist, delta)?;
            let route = route.unwrap_or_else(|| "lp".into());
            let out = match route.as_str() {
                "lp" => json!({"support": support_sepbody(&q, &dir)?}),
                "bisect" => json!({"support": support_sepbody_bisect(&q, &dir)?}),
                "both" => {
                    let a = support_sepbody(&q, &dir)?;
                    let b = support_sepbody_bisect(&q, &dir)?;
                    json!({"support": a, "support_bisect": b, "difference": a - b})
                }
                other => return Err(usage(format!("unknown route `{other}`"))),
            };
            io::write_output(&sink(&common), &serde_json::to_string_pretty(&out).unwrap())
                .map_err(usage)?;
            Ok(0)
        }
        Command::SepbodyBoundary {
            common,
            delta,
            rays,
        } => {
            let (body, dist) = load_inputs(&common, &cfg)?;
            if body.dim() != 2 {
                return Err(usage("boundary sweeps are 2D".into()));
            }
            let delta = pick(&delta, &cfg.delta, "delta").map_err(usage)?;
            let rays = pick_or(&rays, &cfg.rays, 360);
            let q = SeparationQuery::new(body, dist, delta)?;
            let o = q.body().centroid();
            let mut points = Vec::with_capacity(rays);
            for k in 0..rays {
                let angle = 2.0 * std::f64::consts::PI * (k as f64) / rays as f64;
                let v = Vector(vec![angle.cos(), angle.sin()]);
                let p = boundary_ray(&q, &o, &v)?;
                points.push((angle, p));
            }
            let format = pick_or(&common.format, &cfg.format, "csv".into());
            let text = match format.as_str() {
                "csv" => {
                    let mut csv = String::from("angle,x,y\n");
                    for (angle, p) in &points {
                        csv.push_str(&format!("{angle},{},{}\n", p[0], p[1]));
                    }
                    csv.trim_end().to_string()
                }
                "json" => {
                    let rows: Vec<serde_json::Value> = points
                        .iter()
                        .map(|(a, p)| json!({"angle": a, "point": p}))
                        .collect();
                    serde_json::to_string_pretty(&rows).unwrap()
                }
                other => return Err(usage(format!("unknown format `{other}`"))),
            };
            io::write_output(&sink(&common), &text).map_err(usage)?;
            Ok(0)
        }
        Command::Kphi { common } => {
            let (body, dist) = load_inputs(&common, &cfg)?;
            let p = k_phi(&body, &dist)?;
            io::write_output(
                &sink(&common),
                &serde_json::to_string_pretty(&p.halfspaces).unwrap(),
            )
            .map_err(usage)?;
            Ok(0)
        }
        Command::Simulate {
            common,
            n,
            reps,
            seed,
            probes,
            dump,
            window,
        } => {
            let (body, dist) = load_inputs(&common, &cfg)?;
            let n = pick(&n, &cfg.n, "n").map_err(usage)?;
            let reps = pick(&reps, &cfg.reps, "reps").map_err(usage)?;
            let seed = pick_or(&seed, &cfg.seed, 0);
            let probes = match pick(&probes, &cfg.probes, "probes") {
                Ok(text) => io::parse_vectors(&text).map_err(usage)?,
                Err(_) => Vec::new(),
            };
            let radius = window.unwrap_or_else(|| default_window_radius(&body, &dist, n));
            let params = ProcessParams::new(n, dist, radius, seed)?;
            let records = run_replications(&body, &params, reps, &probes)?;
            if let Some(dump_path) = dump {
                let lines: Vec<String> = records
                    .iter()
                    .map(|r| r.to_json_record(&probes).to_string())
                    .collect();
                std::fs::write(&dump_path, lines.join("\n") + "\n")
                    .map_err(|e| usage(format!("cannot write {dump_path}: {e}")))?;
            }
            let estimates =
                FunctionalEstimates::from_records(&records, probes.len(), DEFAULT_CI_LEVEL);
            let manifest = json!({
                "params": {
                    "n": n,
                    "window_radius": radius,
                    "seed": seed,
                    "reps": reps,
                    "probes": probes,
                },
                "estimates": estimates,
            });
            io::write_output(&sink(&common), &serde_json::to_string_pretty(&manifest).unwrap())
                .map_err(usage)?;
            Ok(0)
        }
        Command::Verify {
            common,
            check,
            n,
            reps,
            seed,
            dir,
            accept,
            label,
        } => {
            let (body, dist) = load_inputs(&common, &cfg)?;
            let check = pick_or(&check, &cfg.check, "all".into());
            let n = pick(&n, &cfg.n, "n").map_err(usage)?;
            let default_reps = if body.dim() == 2 { 10_000 } else { 3_000 };
            let reps = pick_or(&reps, &cfg.reps, default_reps);
            let seed = pick_or(&seed, &cfg.seed, 0);
            let label = pick_or(&label, &cfg.label, "body".into());
            let ccfg = CheckConfig::new(&label, reps, seed);
            let dir_vec = match pick(&dir, &cfg.dir, "dir") {
                Ok(text) => io::parse_vector(&text).map_err(usage)?,
                Err(_) => dist.atoms()[0].u.clone(),
            };
            let mut reports: Vec<TheoremReport> = Vec::new();
            let checks: Vec<&str> = if check == "all" {
                vec!["thm32", "thm33", "thm31", "eq313"]
            } else {
                vec![check.as_str()]
            };
            for c in checks {
                let report = match c {
                    "thm32" => check_support_bound(&body, &dist, n, &dir_vec, &ccfg)?,
                    "thm33" => check_width_bound(&body, &dist, n, &ccfg)?,
                    "thm31" => check_volume_bound(&body, &dist, n, &ccfg)?,
                    "eq313" => check_excess_volume_identity(&body, &dist, n, &ccfg)?,
                    "conditional" => {
                        let accept = pick_or(&accept, &cfg.accept, 1000);
                        check_conditional_representation(&body, &dist, n, accept, &ccfg)?
                    }
                    other => return Err(usage(format!("unknown check `{other}`"))),
                };
                eprintln!(
                    "{}: {:?} ({:.2}s)",
                    report.check, report.verdict, report.runtime_seconds
                );
                reports.push(report);
            }
            io::write_output(&sink(&common), &serde_json::to_string_pretty(&reports).unwrap())
                .map_err(usage)?;
            let any_fail = reports.iter().any(|r| r.verdict == Verdict::Fail);
            let any_inconclusive = reports
                .iter()
                .any(|r| r.verdict == Verdict::Inconclusive);
            Ok(if any_fail {
                EXIT_VERIFY_FAIL
            } else if any_inconclusive {
                EXIT_VERIFY_INCONCLUSIVE
            } else {
                0
            })
        }
        Command::Ellipse {
            common,
            delta,
            point,
        } => {
            let (body, dist) = load_inputs(&common, &cfg)?;
            let delta = pick(&delta, &cfg.delta, "delta").map_err(usage)?;
            let point = io::parse_vector(&pick(&point, &cfg.point, "point").map_err(usage)?)
                .map_err(usage)?;
            let e = ellipse_params(&body, &point, delta, &dist)?;
            let out = json!({
                "focus_p": e.focus_p,
                "focus_q": e.focus_q,
                "axis_sum": e.axis_sum,
            });
            io::write_output(&sink(&common), &serde_json::to_string_pretty(&out).unwrap())
                .map_err(usage)?;
            Ok(0)
        }
    }
}

fn load_inputs(
    common: &CommonArgs,
    cfg: &FileConfig,
) -> Result<
    (
        sepbody_core::geometry::VPolytope,
        sepbody_core::directional::DirectionalDistribution,
    ),
    CliError,
> {
    let body_path = pick(&common.body, &cfg.body, "body").map_err(usage)?;
    let phi_spec = pick(&common.phi, &cfg.phi, "phi").map_err(usage)?;
    let body = io::load_body(&body_path).map_err(usage)?;
    let dist = io::load_phi(&phi_spec).map_err(usage)?;
    if body.dim() != dist.dim() {
        return Err(usage(format!(
            "body dimension {} does not match distribution dimension {}",
            body.dim(),
            dist.dim()
        )));
    }
    Ok((body, dist))
}
