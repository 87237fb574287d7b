use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use specset::blaschke::{blaschke_on_matrix, similarity_transform};
use specset::classify::{
    default_tolerance, hyponormal_resolvent_identity, is_good_disk, is_hyponormal,
    is_rho_contraction_disks, is_rho_contraction_poisson, is_rho_contraction_tangent,
    numerical_radius, numerical_range_boundary, theorem2_hypotheses, ClassifyReport, RhoGrid,
};
use specset::gallery;
use specset::geometry::{condition_a_check, exterior_disk_condition, pole_set_report, transversal_at, Domain};
use specset::ksearch::{k_lower_bound, split_by_poles, verify_split_calculus, SearchConfig};
use specset::matcalc::{eval_on_matrix, C64};
use specset::{Error, ExtComplex, Result};

use crate::{inputs, GalleryAction, OutputArgs, Route, Verb};

/// Largest aperture index tried by the transversality search.
const TRANSVERSAL_MAX_M: usize = 64;

pub struct Outcome {
    verb: &'static str,
    config: Value,
    grid_risk: String,
    report: Value,
    /// `None` for verbs that are not predicates.
    verdict: Option<bool>,
    points: Option<Vec<C64>>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

fn csv(points: &[C64]) -> String {
    let mut s = String::from("re,im\n");
    for z in points {
        writeln!(s, "{:e},{:e}", z.re, z.im).expect("string write");
    }
    s
}

impl Outcome {
    /// Writes the report and point cloud; returns the exit code.
    pub fn emit(self, out: &OutputArgs) -> Result<u8> {
        let mut doc = json!({
            "verb": self.verb,
            "config": self.config,
            "grid_risk": self.grid_risk,
            "report": self.report,
        });
        if let Some(v) = self.verdict {
            doc["verdict"] = json!(v);
        }
        if out.timestamp {
            let secs = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            doc["timestamp"] = json!(secs);
        }
        let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
        // `range` prints its point cloud when no CSV path is given
        let csv_to_stdout = self.verb == "range" && out.csv.is_none();
        match (&out.csv, &self.points) {
            (Some(path), Some(points)) => write_file(path, &csv(points))?,
            (Some(_), None) => {
                return Err(Error::InvalidArgument(format!("--csv is not supported by {}", self.verb)))
            }
            _ => {}
        }
        let stdout = std::io::stdout();
        let mut handle = stdout.lock();
        let io_err = |e: std::io::Error| Error::InvalidArgument(format!("cannot write to stdout: {e}"));
        if csv_to_stdout {
            handle.write_all(csv(self.points.as_deref().unwrap_or(&[])).as_bytes()).map_err(io_err)?;
        }
        match &out.out {
            Some(path) => write_file(path, &text)?,
            None if !csv_to_stdout => handle.write_all(text.as_bytes()).map_err(io_err)?,
            None => {}
        }
        Ok(if self.verdict == Some(false) { 1 } else { 0 })
    }
}

pub fn dispatch(verb: &Verb) -> Result<Outcome> {
    match verb {
        Verb::Range { matrix, grid } => range(matrix, *grid as usize),
        Verb::Rho { matrix, rho, route, grid, tol } => rho_verb(matrix, *rho, *route, *grid as usize, *tol),
        Verb::GoodDisk { matrix, disk, tol } => good_disk(matrix, disk, *tol),
        Verb::Kbound { matrix, domain, poles, degree, s, grid, seed, budget } => {
            let cfg = SearchConfig {
                degree: *degree as usize,
                s: *s as usize,
                grid: *grid as usize,
                restarts: *budget as usize,
                seed: *seed,
                ..SearchConfig::default()
            };
            kbound(matrix, domain, poles.as_deref(), cfg)
        }
        Verb::BlaschkeSim { matrix, blaschke } => blaschke_sim(matrix, blaschke),
        Verb::Geometry { domain, grid, poles, radius, domain2, at } => {
            geometry(domain, *grid as usize, poles.as_deref(), *radius, domain2.as_deref(), *at)
        }
        Verb::Theorem2 { matrix, domain, radius, grid, tol } => theorem2(matrix, domain, *radius, *grid as usize, *tol),
        Verb::Hyponormal { matrix, tol, at } => hyponormal(matrix, *tol, *at),
        Verb::Split { rational, domain, domain2, matrix } => split(rational, domain, domain2, matrix.as_deref()),
        Verb::Gallery { action } => gallery_verb(action),
    }
}

fn range(matrix: &Path, grid: usize) -> Result<Outcome> {
    let t = inputs::matrix(matrix)?;
    let points = numerical_range_boundary(&t, grid)?;
    Ok(Outcome {
        verb: "range",
        config: json!({ "matrix": path_str(matrix), "grid": grid }),
        grid_risk: format!(
            "support points of W(T) at {grid} equally spaced directions; the polygon through them lies inside W(T)"
        ),
        report: json!({ "numerical_radius": numerical_radius(&t, grid), "points": points.len() }),
        verdict: None,
        points: Some(points),
    })
}

fn rho_grid(grid: usize) -> RhoGrid {
    RhoGrid::with_sizes((grid / 4).max(8), grid, grid, (grid / 2).max(8))
}

fn rho_verb(matrix: &Path, rho: f64, route: Route, grid: usize, tol: Option<f64>) -> Result<Outcome> {
    let t = inputs::matrix(matrix)?;
    let tol = tol.unwrap_or_else(|| default_tolerance(&t));
    let g = rho_grid(grid);
    let sizes = json!({
        "radii": g.radii.len(),
        "angles": g.angles.len(),
        "tangency": g.tangency.len(),
        "mu_moduli": g.mu_moduli,
        "refine": g.refine,
    });
    let (report, verdict) = match route {
        Route::Poisson => one(is_rho_contraction_poisson(&t, rho, &g, tol)?),
        Route::Disks => one(is_rho_contraction_disks(&t, rho, &g, tol)?),
        Route::Tangent => one(is_rho_contraction_tangent(&t, rho, &g, tol)?),
        Route::Both => {
            let p = is_rho_contraction_poisson(&t, rho, &g, tol)?;
            let d = is_rho_contraction_disks(&t, rho, &g, tol)?;
            let agree = p.holds() == d.holds();
            let verdict = p.holds() && d.holds();
            (json!({ "poisson": p, "disks": d, "agree": agree }), verdict)
        }
    };
    let route_name = match route {
        Route::Poisson => "poisson",
        Route::Disks => "disks",
        Route::Tangent => "tangent",
        Route::Both => "both",
    };
    Ok(Outcome {
        verb: "rho",
        config: json!({ "matrix": path_str(matrix), "rho": rho, "route": route_name, "grid": sizes, "tol": tol }),
        grid_risk: format!(
            "quantifiers over (r, t), centers μ and tangency points were sampled ({grid} angles) and the worst sample refined locally; a true verdict holds on the samples only"
        ),
        report,
        verdict: Some(verdict),
        points: None,
    })
}

fn one(r: ClassifyReport) -> (Value, bool) {
    let holds = r.holds();
    (to_value(&r), holds)
}

fn good_disk(matrix: &Path, disk: &Path, tol: Option<f64>) -> Result<Outcome> {
    let t = inputs::matrix(matrix)?;
    let d = inputs::disk(disk)?;
    let tol = tol.unwrap_or_else(|| default_tolerance(&t));
    let (report, verdict) = one(is_good_disk(&t, &d, tol)?);
    Ok(Outcome {
        verb: "good-disk",
        config: json!({ "matrix": path_str(matrix), "disk": d, "tol": tol }),
        grid_risk: "none: a single norm or eigenvalue computation".into(),
        report,
        verdict: Some(verdict),
        points: None,
    })
}

fn kbound(matrix: &Path, domain: &Path, poles: Option<&[ExtComplex]>, cfg: SearchConfig) -> Result<Outcome> {
    let t = inputs::matrix(matrix)?;
    let dom = inputs::domain(domain)?;
    let poles = poles.map(<[_]>::to_vec).unwrap_or_else(|| dom.default_pole_set());
    let result = k_lower_bound(&t, &dom, &poles, &cfg)?;
    Ok(Outcome {
        verb: "kbound",
        config: json!({ "matrix": path_str(matrix), "domain": path_str(domain), "poles": poles, "search": cfg }),
        grid_risk: format!(
            "boundary supremum sampled at {} points; K_lower is the best of {} seeded restarts and bounds the constant from below only",
            cfg.grid, cfg.restarts
        ),
        report: to_value(&result),
        verdict: None,
        points: None,
    })
}

fn blaschke_sim(matrix: &Path, blaschke: &Path) -> Result<Outcome> {
    let t = inputs::matrix(matrix)?;
    let b = inputs::blaschke(blaschke)?;
    let config = json!({ "matrix": path_str(matrix), "blaschke": b });
    let grid_risk = "none: closed-form model-space functions evaluated on T".to_string();
    let norm = blaschke_on_matrix(&b, &t)?.opnorm()?;
    // the precondition ‖B(T)‖ ≤ 1 is the predicate of this verb
    let (report, verdict) = match similarity_transform(&b, &t) {
        Ok(sim) => (to_value(&sim), true),
        Err(Error::Precondition(msg)) => (json!({ "blaschke_norm": norm, "reason": msg }), false),
        Err(e) => return Err(e),
    };
    Ok(Outcome { verb: "blaschke-sim", config, grid_risk, report, verdict: Some(verdict), points: None })
}

fn geometry(
    domain: &Path,
    grid: usize,
    poles: Option<&[ExtComplex]>,
    radius: Option<f64>,
    domain2: Option<&Path>,
    at: Option<ExtComplex>,
) -> Result<Outcome> {
    let dom = inputs::domain(domain)?;
    let mut report = json!({
        "kind": match dom { Domain::Disks(_) => "disks", Domain::Piecewise(_) => "piecewise" },
        "bounded": dom.is_bounded(),
        "complement_components": dom.component_count(),
        "default_pole_set": dom.default_pole_set(),
    });
    let mut checks: Vec<bool> = Vec::new();
    if let Some(poles) = poles {
        let r = pole_set_report(poles, &dom);
        checks.push(r.valid);
        report["pole_set"] = to_value(&r);
    }
    let points = if dom.is_bounded() { Some(dom.boundary_grid(grid)?) } else { None };
    if dom.is_bounded() {
        let pw = dom.to_piecewise()?;
        report["length"] = json!(pw.length());
        if let Some(r) = radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidArgument(format!("--radius must be positive, got {r}")));
            }
            let ext = exterior_disk_condition(&pw, r, grid);
            checks.push(ext.passed);
            report["exterior_disk"] = json!({ "passed": ext.passed, "radius": ext.radius, "failures": ext.failures });
        }
        if !pw.exterior().is_empty() {
            let a = condition_a_check(&pw);
            checks.push(a.passed);
            report["condition_a"] = to_value(&a);
        }
    } else if radius.is_some() {
        return Err(Error::InvalidArgument("--radius needs a bounded domain".into()));
    }
    if let (Some(path), Some(z)) = (domain2, at) {
        let other = inputs::domain(path)?;
        let tr = transversal_at(&dom, &other, z, TRANSVERSAL_MAX_M)?;
        checks.push(tr.transversal);
        report["transversality"] = to_value(&tr);
    }
    Ok(Outcome {
        verb: "geometry",
        config: json!({
            "domain": path_str(domain),
            "grid": grid,
            "poles": poles,
            "radius": radius,
            "domain2": domain2.map(path_str),
            "at": at,
        }),
        grid_risk: format!(
            "exterior disks tested at {grid} boundary samples plus junctions; transversality searched over apertures 2π/m with m ≤ {TRANSVERSAL_MAX_M}"
        ),
        report,
        verdict: if checks.is_empty() { None } else { Some(checks.iter().all(|&c| c)) },
        points,
    })
}

fn theorem2(matrix: &Path, domain: &Path, radius: Option<f64>, grid: usize, tol: Option<f64>) -> Result<Outcome> {
    let t = inputs::matrix(matrix)?;
    let mut pw = inputs::domain(domain)?.to_piecewise()?;
    if let Some(r) = radius {
        pw = pw.with_normal_exterior(r, grid)?;
    }
    let tol = tol.unwrap_or_else(|| default_tolerance(&t));
    let report = theorem2_hypotheses(&t, &pw, tol)?;
    let samples: usize = pw.exterior().iter().map(|e| e.centers.len()).sum();
    Ok(Outcome {
        verb: "theorem2",
        config: json!({
            "matrix": path_str(matrix),
            "domain": path_str(domain),
            "radius": radius,
            "grid": radius.map(|_| grid),
            "tol": tol,
        }),
        grid_risk: format!(
            "the exterior centers μ(λ) are {samples} samples; slacks and the common-intersection clause hold at those samples only"
        ),
        verdict: Some(report.passed),
        report: to_value(&report),
        points: None,
    })
}

fn hyponormal(matrix: &Path, tol: Option<f64>, at: Option<ExtComplex>) -> Result<Outcome> {
    let t = inputs::matrix(matrix)?;
    let tol = tol.unwrap_or_else(|| default_tolerance(&t));
    let r = is_hyponormal(&t, tol);
    let mut report = json!({ "hyponormal": r });
    if let Some(p) = at {
        let lambda = p
            .as_finite()
            .ok_or_else(|| Error::InvalidArgument("--at must be a finite point".into()))?;
        let (lhs, rhs) = hyponormal_resolvent_identity(&t, lambda)?;
        report["resolvent_identity"] = json!({ "resolvent_norm": lhs, "inverse_distance": rhs });
    }
    Ok(Outcome {
        verb: "hyponormal",
        config: json!({ "matrix": path_str(matrix), "tol": tol, "at": at }),
        grid_risk: "none: one Hermitian eigenvalue computation".into(),
        verdict: Some(r.holds()),
        report,
        points: None,
    })
}

fn split(rational: &Path, domain: &Path, domain2: &Path, matrix: Option<&Path>) -> Result<Outcome> {
    let f = inputs::rational(rational)?;
    let d1 = inputs::domain(domain)?;
    let d2 = inputs::domain(domain2)?;
    let (f1, f2) = split_by_poles(&f, &d1, &d2)?;
    let mut report = json!({ "f1": f1, "f2": f2 });
    if let Some(m) = matrix {
        let t = inputs::matrix(m)?;
        report["residual"] = json!(verify_split_calculus(&f, &t, &d1, &d2)?);
        report["norm_f_of_t"] = json!(eval_on_matrix(&f, &t)?.opnorm()?);
    }
    Ok(Outcome {
        verb: "split",
        config: json!({
            "rational": path_str(rational),
            "domain": path_str(domain),
            "domain2": path_str(domain2),
            "matrix": matrix.map(path_str),
        }),
        grid_risk: "none: poles are assigned exactly".into(),
        report,
        verdict: None,
        points: None,
    })
}

fn gallery_verb(action: &GalleryAction) -> Result<Outcome> {
    let (config, report, verdict) = match action {
        GalleryAction::List => (json!({ "action": "list" }), json!(gallery::list()), None),
        GalleryAction::Run { name } => {
            let items = if name == "all" { gallery::run_all()? } else { vec![gallery::run(name)?] };
            let passed = items.iter().all(|g| g.passed());
            (json!({ "action": "run", "name": name }), to_value(&items), Some(passed))
        }
    };
    Ok(Outcome {
        verb: "gallery",
        config,
        grid_risk: "claims are evaluated at the sample counts recorded in each item's parameters".into(),
        report,
        verdict,
        points: None,
    })
}
