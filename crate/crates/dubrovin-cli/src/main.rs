//! Command-line front end: curve and Riemann-matrix ingestion, exact and
//! numeric computations, JSON/CSV emission.
//!
//! Every subcommand writes machine-readable artifacts (JSON or CSV) and a
//! short human summary to standard output. Errors exit nonzero with an
//! error JSON on stdout. Thread count is controlled only by the
//! `RAYON_NUM_THREADS` environment variable.

use clap::{Args, Parser, Subcommand};
use dubrovin::curvefield::holomorphic_basis;
use dubrovin::exactalg::{Rational, VarTable, WPoly};
use dubrovin::hirota::{
    estimate_cd, grid_points, hirota_quartic, kp_residual, linspace, DubrovinPoint, ThetaTau,
};
use dubrovin::ideal::{
    graded_implicitize, initial_ideal_generators, membership_check, verify_initial_containment,
    SymbolicParam,
};
use dubrovin::io;
use dubrovin::param::lift_canonical;
use dubrovin::schottky::{genus2_quintics, lambda_nullspace, recover_canonical_quartics};
use dubrovin::theta::{doubled_constants, theta};
use num_complex::Complex64 as C;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dubrovin",
    about = "Dubrovin threefolds: exact parametrizations and ideals, theta numerics, KP verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Output file (JSON or CSV depending on the subcommand)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Numeric tolerance for theta evaluation
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Seed for reproducible random sampling
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the group-applied, denominator-cleared parametrization of the
    /// threefold as sparse polynomials in a, b, c, x, y
    Parametrize {
        #[arg(long)]
        curve: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Check a list of (U, V, W) polynomials against the parametrization
    VerifyIdeal {
        #[arg(long)]
        curve: PathBuf,
        /// JSON file: {"polynomials": [<sparse poly>...]}
        #[arg(long)]
        polys: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Exact kernel of the degree-d relation space
    Implicitize {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        degree: i64,
        /// Override the matrix entry cap
        #[arg(long)]
        cap: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Verify that canonical-ideal polarizations and (U V W) minors admit
    /// lower-weight trailing terms
    InitialCheck {
        #[arg(long)]
        curve: PathBuf,
        /// JSON file: {"polynomials": [<canonical generators in u-vars>]}
        #[arg(long)]
        gens: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_shift: i64,
        #[arg(long)]
        cap: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Evaluate the theta function at a point
    ThetaEval {
        #[arg(long)]
        riemann: PathBuf,
        /// z as semicolon-separated re,im pairs: "re,im;re,im"
        #[arg(long)]
        z: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// The Hirota quartic at a z-argument, as a symbolic quartic
    Hirota {
        #[arg(long)]
        riemann: PathBuf,
        #[arg(long)]
        z: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Least-squares estimate of (c, d) for a numeric point
    EstimateCd {
        #[arg(long)]
        riemann: PathBuf,
        /// JSON file with {"u": [[re,im]..], "v": .., "w": ..}
        #[arg(long)]
        point: PathBuf,
        #[arg(long, default_value_t = 32)]
        samples: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Recover canonical-curve quartics (or genus-2 quintics) from theta
    /// constants
    SchottkyRecover {
        #[arg(long)]
        riemann: PathBuf,
        /// Rank threshold ratio for the nullspace
        #[arg(long, default_value_t = 1e-6)]
        rank_tol: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Evaluate the KP solution and residuals over a grid, CSV output
    KpGrid {
        #[arg(long)]
        riemann: PathBuf,
        #[arg(long)]
        point: PathBuf,
        #[arg(long, default_value_t = -2.0)]
        xmin: f64,
        #[arg(long, default_value_t = 2.0)]
        xmax: f64,
        #[arg(long, default_value_t = 10)]
        xsteps: usize,
        #[arg(long, default_value_t = -2.0)]
        ymin: f64,
        #[arg(long, default_value_t = 2.0)]
        ymax: f64,
        #[arg(long, default_value_t = 10)]
        ysteps: usize,
        /// Comma-separated t samples
        #[arg(long, default_value = "0.0")]
        times: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Symbolic Hirota expansion of a finite exponential sum
    DegenerateHirota {
        /// JSON file: {"support": [[..]..]}
        #[arg(long)]
        support: PathBuf,
        /// JSON file: list of rational strings, e.g. ["1","1","1","-1"]
        #[arg(long)]
        gamma: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = json!({ "error": e });
            println!("{msg}");
            ExitCode::FAILURE
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let data = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    if data.trim().is_empty() {
        return Err(format!("{} is empty", path.display()));
    }
    serde_json::from_str(&data).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn write_artifact(out: &Option<PathBuf>, content: &str, kind: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            std::fs::write(path, content)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            println!("wrote {kind} to {}", path.display());
            Ok(())
        }
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn load_symbolic(curve_path: &Path) -> Result<SymbolicParam, String> {
    let cj: io::CurveJson = read_json(curve_path)?;
    let (curve, numerators) = io::curve_from_json(&cj).map_err(|e| e.to_string())?;
    let numerators = match numerators {
        Some(n) => n,
        None => {
            let d = curve
                .f()
                .terms()
                .map(|(e, _)| e[0] + e[1])
                .max()
                .unwrap_or(0);
            let defaults = dubrovin::curvefield::default_numerators(d);
            if defaults.is_empty() {
                return Err("curve needs explicit numerators (degree < 3)".into());
            }
            defaults
        }
    };
    let basis = holomorphic_basis(&curve, &numerators).map_err(|e| e.to_string())?;
    let param = lift_canonical(&curve, &basis).map_err(|e| e.to_string())?;
    SymbolicParam::new(&param).map_err(|e| e.to_string())
}

fn parse_z(s: &str) -> Result<Vec<C>, String> {
    s.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').collect();
            if parts.len() != 2 {
                return Err(format!("bad z component `{pair}`, expected re,im"));
            }
            let re: f64 = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
            let im: f64 = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
            Ok(C::new(re, im))
        })
        .collect()
}

#[derive(serde::Deserialize)]
struct PointJson {
    u: Vec<[f64; 2]>,
    v: Vec<[f64; 2]>,
    w: Vec<[f64; 2]>,
    #[serde(default)]
    c: Option<[f64; 2]>,
    #[serde(default)]
    d: Option<[f64; 2]>,
    #[serde(default, rename = "D")]
    dvec: Option<Vec<[f64; 2]>>,
}

fn to_cvec(v: &[[f64; 2]]) -> Vec<C> {
    v.iter().map(|[re, im]| C::new(*re, *im)).collect()
}

#[derive(serde::Deserialize)]
struct PolyListJson {
    polynomials: Vec<io::PolyJson>,
}

fn run(cmd: Command) -> Result<(), String> {
    match cmd {
        Command::Parametrize { curve, common } => {
            let sym = load_symbolic(&curve)?;
            let g = sym.genus();
            let coords = sym.coordinates();
            let blocks = ["u", "v", "w"];
            let mut obj = serde_json::Map::new();
            obj.insert("genus".into(), json!(g));
            for (bi, block) in blocks.iter().enumerate() {
                let list: Vec<_> = (0..g)
                    .map(|i| io::poly_to_json(&coords[bi * g + i]))
                    .collect();
                obj.insert((*block).into(), serde_json::to_value(list).unwrap());
            }
            let text = serde_json::to_string_pretty(&obj).unwrap();
            println!(
                "parametrization of a genus-{g} threefold: {} coordinates in (a, b, c, x, y)",
                3 * g
            );
            write_artifact(&common.out, &text, "parametrization JSON")
        }
        Command::VerifyIdeal {
            curve,
            polys,
            common,
        } => {
            let sym = load_symbolic(&curve)?;
            let list: PolyListJson = read_json(&polys)?;
            let mut results = Vec::new();
            let mut all_ok = true;
            for (k, pj) in list.polynomials.iter().enumerate() {
                let p = io::poly_from_json(pj).map_err(|e| e.to_string())?;
                let p = reindex_to_uvw(&p, sym.genus())?;
                let ok = membership_check(&p, &sym).map_err(|e| e.to_string())?;
                println!("polynomial {k}: {}", if ok { "PASS" } else { "FAIL" });
                all_ok &= ok;
                results.push(ok);
            }
            let text = serde_json::to_string_pretty(&json!({ "member": results })).unwrap();
            write_artifact(&common.out, &text, "verdicts JSON")?;
            if all_ok {
                Ok(())
            } else {
                Err("some polynomials are not members".into())
            }
        }
        Command::Implicitize {
            curve,
            degree,
            cap,
            common,
        } => {
            let sym = load_symbolic(&curve)?;
            let space = graded_implicitize(&sym, degree, cap).map_err(|e| e.to_string())?;
            println!(
                "degree {degree}: relation space of dimension {}",
                space.dimension
            );
            let basis: Vec<_> = space.basis.iter().map(io::poly_to_json).collect();
            let text = serde_json::to_string_pretty(&json!({
                "degree": degree,
                "dimension": space.dimension,
                "basis": basis,
            }))
            .unwrap();
            write_artifact(&common.out, &text, "relation basis JSON")
        }
        Command::InitialCheck {
            curve,
            gens,
            max_shift,
            cap,
            common,
        } => {
            let sym = load_symbolic(&curve)?;
            let list: PolyListJson = read_json(&gens)?;
            let mut canonical = Vec::new();
            for pj in &list.polynomials {
                let p = io::poly_from_json(pj).map_err(|e| e.to_string())?;
                if p.vars().len() != sym.genus() {
                    return Err(format!(
                        "canonical generators must have {} variables",
                        sym.genus()
                    ));
                }
                let ut = VarTable::u_only(sym.genus());
                let mut q = WPoly::zero(ut);
                for (e, c) in p.terms() {
                    q.add_term(e.clone(), c.clone());
                }
                canonical.push(q);
            }
            let initial =
                initial_ideal_generators(&canonical, sym.genus()).map_err(|e| e.to_string())?;
            println!(
                "initial ideal: {} generators (polarizations + minors)",
                initial.len()
            );
            let mut results = Vec::new();
            let mut all_ok = true;
            for (k, gen) in initial.iter().enumerate() {
                let ok = verify_initial_containment(&sym, gen, max_shift, cap)
                    .map_err(|e| format!("generator {k}: {e}"))?;
                println!("generator {k}: {}", if ok { "PASS" } else { "FAIL" });
                all_ok &= ok;
                results.push(ok);
            }
            let text = serde_json::to_string_pretty(&json!({ "contained": results })).unwrap();
            write_artifact(&common.out, &text, "verdicts JSON")?;
            if all_ok {
                Ok(())
            } else {
                Err("some generators failed containment".into())
            }
        }
        Command::ThetaEval {
            riemann,
            z,
            common,
        } => {
            let rj: io::RiemannJson = read_json(&riemann)?;
            let b = io::riemann_from_json(&rj).map_err(|e| e.to_string())?;
            let zv = parse_z(&z)?;
            if zv.len() != b.g() {
                return Err(format!("z has {} components, g = {}", zv.len(), b.g()));
            }
            let v = theta(&zv, &b, common.tol).map_err(|e| e.to_string())?;
            println!("theta(z) = {v}");
            let text = serde_json::to_string_pretty(&json!({ "re": v.re, "im": v.im })).unwrap();
            write_artifact(&common.out, &text, "value JSON")
        }
        Command::Hirota {
            riemann,
            z,
            common,
        } => {
            let rj: io::RiemannJson = read_json(&riemann)?;
            let b = io::riemann_from_json(&rj).map_err(|e| e.to_string())?;
            let zv = parse_z(&z)?;
            let q = hirota_quartic(&zv, &b, common.tol).map_err(|e| e.to_string())?;
            println!("Hirota quartic with {} terms", q.num_terms());
            let text = serde_json::to_string_pretty(&io::complex_poly_to_json(&q)).unwrap();
            write_artifact(&common.out, &text, "quartic JSON")
        }
        Command::EstimateCd {
            riemann,
            point,
            samples,
            common,
        } => {
            let rj: io::RiemannJson = read_json(&riemann)?;
            let b = io::riemann_from_json(&rj).map_err(|e| e.to_string())?;
            let pj: PointJson = read_json(&point)?;
            let (u, v, w) = (to_cvec(&pj.u), to_cvec(&pj.v), to_cvec(&pj.w));
            let (c, d, resid) = estimate_cd(&u, &v, &w, &b, samples, common.seed, common.tol)
                .map_err(|e| e.to_string())?;
            println!("c = {c}");
            println!("d = {d}");
            println!("relative residual = {resid:.3e}");
            let text = serde_json::to_string_pretty(&json!({
                "c": [c.re, c.im],
                "d": [d.re, d.im],
                "residual": resid,
            }))
            .unwrap();
            write_artifact(&common.out, &text, "estimate JSON")
        }
        Command::SchottkyRecover {
            riemann,
            rank_tol,
            common,
        } => {
            let rj: io::RiemannJson = read_json(&riemann)?;
            let b = io::riemann_from_json(&rj).map_err(|e| e.to_string())?;
            let constants = doubled_constants(&b, common.tol).map_err(|e| e.to_string())?;
            let space = lambda_nullspace(&constants, rank_tol).map_err(|e| e.to_string())?;
            println!(
                "lambda nullspace dimension {} (gap {:.3e})",
                space.basis.len(),
                space.gap
            );
            if b.g() == 2 && space.basis.is_empty() {
                let quintics =
                    genus2_quintics(&constants, rank_tol).map_err(|e| e.to_string())?;
                println!("no quartics at genus 2; emitting the two recovered quintics");
                let list: Vec<_> = quintics.iter().map(io::complex_poly_to_json).collect();
                let text = serde_json::to_string_pretty(&json!({ "quintics": list })).unwrap();
                return write_artifact(&common.out, &text, "quintic JSON");
            }
            let quartics =
                recover_canonical_quartics(&constants, rank_tol).map_err(|e| e.to_string())?;
            println!("recovered {} canonical quartic(s)", quartics.len());
            let list: Vec<_> = quartics.iter().map(io::complex_poly_to_json).collect();
            let text = serde_json::to_string_pretty(&json!({ "quartics": list })).unwrap();
            write_artifact(&common.out, &text, "quartic JSON")
        }
        Command::KpGrid {
            riemann,
            point,
            xmin,
            xmax,
            xsteps,
            ymin,
            ymax,
            ysteps,
            times,
            common,
        } => {
            let rj: io::RiemannJson = read_json(&riemann)?;
            let b = io::riemann_from_json(&rj).map_err(|e| e.to_string())?;
            let pj: PointJson = read_json(&point)?;
            let (u, v, w) = (to_cvec(&pj.u), to_cvec(&pj.v), to_cvec(&pj.w));
            let (c, d) = match (pj.c, pj.d) {
                (Some(c), Some(d)) => (C::new(c[0], c[1]), C::new(d[0], d[1])),
                _ => {
                    let (c, d, resid) = estimate_cd(&u, &v, &w, &b, 32, common.seed, common.tol)
                        .map_err(|e| e.to_string())?;
                    println!("fitted c = {c}, d = {d} (residual {resid:.3e})");
                    (c, d)
                }
            };
            let dvec = pj
                .dvec
                .map(|v| to_cvec(&v))
                .unwrap_or_else(|| vec![C::new(0.0, 0.0); b.g()]);
            let pt = DubrovinPoint::new(u, v, w, c, d).map_err(|e| e.to_string())?;
            let tau = ThetaTau::new(pt, dvec, &b).map_err(|e| e.to_string())?;
            let ts: Vec<f64> = times
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| format!("{e}")))
                .collect::<Result<_, _>>()?;
            let grid = grid_points(
                &linspace(xmin, xmax, xsteps),
                &linspace(ymin, ymax, ysteps),
                &ts,
            );
            let rep = kp_residual(&tau, &grid).map_err(|e| e.to_string())?;
            println!(
                "grid {} x {} x {}: hirota residual {:.3e}, kp residual {:.3e}, {} singular",
                xsteps,
                ysteps,
                ts.len(),
                rep.hirota_rel_max,
                rep.kp_abs_max,
                rep.singular
            );
            let mut csv = String::from("x,y,t,re_u,im_u,singular\n");
            for s in &rep.samples {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    s.x,
                    s.y,
                    s.t,
                    if s.singular { 0.0 } else { s.u.re },
                    if s.singular { 0.0 } else { s.u.im },
                    u8::from(s.singular)
                ));
            }
            write_artifact(&common.out, &csv, "grid CSV")
        }
        Command::DegenerateHirota {
            support,
            gamma,
            common,
        } => {
            let sj: io::SupportJson = read_json(&support)?;
            let gj: Vec<String> = read_json(&gamma)?;
            let coeffs: Vec<Rational> = gj
                .iter()
                .map(|s| io::parse_rational(s).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            let theta = dubrovin::degenerate::ExpSumTheta::new(sj.support, coeffs)
                .map_err(|e| e.to_string())?;
            let h = dubrovin::degenerate::expsum_hirota(&theta).map_err(|e| e.to_string())?;
            println!("{} exponential keys", h.len());
            let entries: Vec<_> = h
                .iter()
                .map(|(k, p)| {
                    json!({
                        "key": k,
                        "coefficient": io::poly_to_json(p),
                    })
                })
                .collect();
            let text = serde_json::to_string_pretty(&json!({ "terms": entries })).unwrap();
            write_artifact(&common.out, &text, "expansion JSON")
        }
    }
}

/// Accept polynomials whose variable list matches the uvw table by name,
/// re-indexing as needed.
fn reindex_to_uvw(p: &WPoly<Rational>, g: usize) -> Result<WPoly<Rational>, String> {
    let t = VarTable::uvw(g);
    if p.vars().names() == t.names() {
        let mut q = WPoly::zero(t);
        for (e, c) in p.terms() {
            q.add_term(e.clone(), c.clone());
        }
        return Ok(q);
    }
    let positions: Vec<usize> = p
        .vars()
        .names()
        .iter()
        .map(|n| t.index_of(n).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    Ok(p.embed(t, &positions))
}
