//! Manufactured-solution experiments: solve, measure, tabulate.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use crate::complex::SimplicialComplex;
use crate::dual::{self, DualComplex};
use crate::error::{DecError, Result};
use crate::forms::{self, PolyForm};
use crate::mesh::{MeshFamily, MeshFamilySpec};
use crate::operators::{self, Cochain};
use crate::poly::Poly2;
use crate::solver::{cg_solve, SolverConfig};
use crate::sparse::SparseMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormKind {
    Eu,
    DEu,
    ERho,
    DERho,
}

impl NormKind {
    pub const ALL: [NormKind; 4] = [NormKind::Eu, NormKind::DEu, NormKind::ERho, NormKind::DERho];

    /// ASCII label used in CSV headers and on the command line.
    pub fn label(self) -> &'static str {
        match self {
            NormKind::Eu => "e_u",
            NormKind::DEu => "de_u",
            NormKind::ERho => "e_rho",
            NormKind::DERho => "de_rho",
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            NormKind::Eu => "e_u",
            NormKind::DEu => "de_u",
            NormKind::ERho => "e_ρ",
            NormKind::DERho => "de_ρ",
        }
    }

    /// Norms measured for a `k`-form problem on a triangulated domain.
    pub fn for_degree(k: usize) -> &'static [NormKind] {
        match k {
            0 => &[NormKind::Eu, NormKind::DEu],
            1 => &NormKind::ALL,
            _ => &[NormKind::Eu, NormKind::ERho],
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for NormKind {
    type Err = DecError;
    fn from_str(s: &str) -> Result<Self> {
        NormKind::ALL
            .into_iter()
            .find(|n| n.label() == s || n.symbol() == s)
            .ok_or_else(|| DecError::InvalidArgument(format!("unknown norm `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct ErrorRecord {
    pub level: usize,
    pub h: f64,
    pub norms: BTreeMap<NormKind, f64>,
    pub iterations: usize,
    pub wall_time: f64,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub k: usize,
    pub family: MeshFamily,
    pub levels: Vec<usize>,
    pub records: Vec<ErrorRecord>,
    /// `log₂(e_m / e_{m+1})` between consecutive records.
    pub rates: BTreeMap<NormKind, Vec<f64>>,
}

impl ConvergenceReport {
    pub fn new(k: usize, family: MeshFamily, records: Vec<ErrorRecord>) -> Self {
        let rates = NormKind::for_degree(k)
            .iter()
            .map(|&n| {
                let r = records
                    .windows(2)
                    .map(|w| (w[0].norms[&n] / w[1].norms[&n]).log2() / (w[0].h / w[1].h).log2())
                    .collect();
                (n, r)
            })
            .collect();
        Self {
            k,
            family,
            levels: records.iter().map(|r| r.level).collect(),
            records,
            rates,
        }
    }

    pub fn norms(&self) -> &'static [NormKind] {
        NormKind::for_degree(self.k)
    }

    /// Value of `norm` at `level`, if that level was run.
    pub fn value(&self, norm: NormKind, level: usize) -> Option<f64> {
        self.records.iter().find(|r| r.level == level)?.norms.get(&norm).copied()
    }

    /// Rate over the last refinement step.
    pub fn final_rate(&self, norm: NormKind) -> Option<f64> {
        self.rates.get(&norm)?.last().copied()
    }
}

/// Manufactured data for the `k`-form problem `Δu = f`.
#[derive(Clone, Debug)]
pub struct ManufacturedProblem {
    pub k: usize,
    pub u: PolyForm,
    pub f: PolyForm,
}

impl ManufacturedProblem {
    pub fn new(k: usize) -> Result<Self> {
        let u = forms::manufactured_solution(k)?;
        let f = forms::hodge_laplacian_smooth(&u);
        Ok(Self { k, u, f })
    }

    /// `δu`, present for `k ≥ 1`.
    pub fn rho(&self) -> Option<PolyForm> {
        (self.k > 0).then(|| forms::codifferential(&self.u).expect("k ≥ 1"))
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub u: Cochain,
    /// `ρ_h = δ_h u_h` for `k ≥ 1`.
    pub rho: Option<Cochain>,
    pub iterations: usize,
    pub residual: f64,
}

/// Assemble and solve `S_k L u_h = S_k R f`.
pub fn solve_problem(
    complex: &SimplicialComplex,
    dual: &DualComplex,
    problem: &ManufacturedProblem,
    cfg: &SolverConfig,
) -> Result<Solution> {
    let k = problem.k;
    let m = operators::system_matrix(complex, dual, k)?;
    let rf = forms::de_rham(complex, &problem.f)?;
    let a = dual.ratio_a(k);
    let rhs: Vec<f64> = rf.values().iter().zip(a).map(|(f, a)| f * a).collect();

    let mut cfg = cfg.clone();
    if k == 0 {
        cfg.deflate_constants = true;
        cfg.constant_weights = Some(a.to_vec());
    }
    let out = cg_solve(&m, &rhs, &cfg)?;
    let mut u = out.x;
    if k == 0 {
        let ru = forms::de_rham(complex, &problem.u)?;
        let total: f64 = a.iter().sum();
        let shift = operators::discrete_inner(dual, &ru, &Cochain::constant(complex, 0, 1.0))? / total
            - a.iter().zip(&u).map(|(a, x)| a * x).sum::<f64>() / total;
        u.iter_mut().for_each(|x| *x += shift);
    }
    let u = Cochain::new(k, u);
    let rho = if k > 0 {
        Some(u.apply(&operators::codifferential_matrix(complex, dual, k)?, k - 1)?)
    } else {
        None
    };
    Ok(Solution {
        u,
        rho,
        iterations: out.iterations,
        residual: out.residual,
    })
}

/// Discrete error norms of a computed state against the manufactured solution.
pub fn compute_errors(
    complex: &SimplicialComplex,
    dual: &DualComplex,
    problem: &ManufacturedProblem,
    u_h: &Cochain,
    rho_h: Option<&Cochain>,
) -> Result<BTreeMap<NormKind, f64>> {
    let k = problem.k;
    let n = complex.dim();
    let mut norms = BTreeMap::new();
    let e_u = forms::de_rham(complex, &problem.u)?.sub(u_h)?;
    norms.insert(NormKind::Eu, operators::discrete_norm(dual, &e_u)?);
    if k < n && NormKind::for_degree(k).contains(&NormKind::DEu) {
        let de_u = e_u.apply(&complex.coboundary_matrix(k)?, k + 1)?;
        norms.insert(NormKind::DEu, operators::discrete_norm(dual, &de_u)?);
    }
    if let Some(rho) = problem.rho() {
        let rho_h = rho_h.ok_or_else(|| DecError::ShapeMismatch("ρ_h required for k ≥ 1".into()))?;
        let e_rho = forms::de_rham(complex, &rho)?.sub(rho_h)?;
        norms.insert(NormKind::ERho, operators::discrete_norm(dual, &e_rho)?);
        if NormKind::for_degree(k).contains(&NormKind::DERho) {
            let d_rho = forms::exterior_derivative(&rho)?;
            let de_rho = forms::de_rham(complex, &d_rho)?.sub(&rho_h.apply(&complex.coboundary_matrix(k - 1)?, k)?)?;
            norms.insert(NormKind::DERho, operators::discrete_norm(dual, &de_rho)?);
        }
    }
    Ok(norms)
}

#[derive(Clone, Debug)]
pub struct ConvergenceConfig {
    pub k: usize,
    pub family: MeshFamily,
    pub levels: Vec<usize>,
    pub seed: u64,
    pub alpha: f64,
    pub solver: SolverConfig,
}

impl ConvergenceConfig {
    pub fn new(k: usize, family: MeshFamily, levels: impl IntoIterator<Item = usize>) -> Self {
        Self {
            k,
            family,
            levels: levels.into_iter().collect(),
            seed: 1,
            alpha: crate::mesh::DEFAULT_ALPHA,
            solver: SolverConfig::default(),
        }
    }

    pub fn spec(&self, level: usize) -> MeshFamilySpec {
        match self.family {
            MeshFamily::Symmetric => MeshFamilySpec::symmetric(level),
            MeshFamily::Perturbed => MeshFamilySpec::perturbed(level, self.seed, self.alpha),
        }
    }
}

/// Failure of one stage of a single level.
#[derive(Debug)]
pub enum LevelError {
    Mesh(DecError),
    Solve(DecError),
}

impl fmt::Display for LevelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelError::Mesh(e) => write!(f, "mesh generation failed: {e}"),
            LevelError::Solve(e) => write!(f, "solve failed: {e}"),
        }
    }
}

impl std::error::Error for LevelError {}

/// Generate, solve and measure one level.
pub fn run_level(cfg: &ConvergenceConfig, problem: &ManufacturedProblem, level: usize) -> std::result::Result<ErrorRecord, LevelError> {
    let start = Instant::now();
    let spec = cfg.spec(level);
    let complex = spec.generate().map_err(LevelError::Mesh)?;
    let dual = DualComplex::build(&complex).map_err(LevelError::Mesh)?;
    let sol = solve_problem(&complex, &dual, problem, &cfg.solver).map_err(LevelError::Solve)?;
    let norms = compute_errors(&complex, &dual, problem, &sol.u, sol.rho.as_ref()).map_err(LevelError::Solve)?;
    Ok(ErrorRecord {
        level,
        h: spec.h(),
        norms,
        iterations: sol.iterations,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Run every level (concurrently) and tabulate errors and rates.
pub fn run_convergence(cfg: &ConvergenceConfig) -> std::result::Result<ConvergenceReport, LevelError> {
    if cfg.levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LevelError::Mesh(DecError::InvalidArgument("levels must be strictly ascending".into())));
    }
    let problem = ManufacturedProblem::new(cfg.k).map_err(LevelError::Solve)?;
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = cfg
            .levels
            .iter()
            .map(|&level| {
                let problem = &problem;
                s.spawn(move || run_level(cfg, problem, level))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("level worker panicked")).collect()
    });
    let records = results.into_iter().collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(ConvergenceReport::new(cfg.k, cfg.family, records))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(format!("unknown format `{s}` (expected markdown or csv)")),
        }
    }
}

fn h_label(r: &ErrorRecord) -> String {
    let m = -r.h.log2();
    if (m - m.round()).abs() < 1e-9 {
        format!("2^-{}", m.round() as i64)
    } else {
        format!("{:.3e}", r.h)
    }
}

pub fn render_report(report: &ConvergenceReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Markdown => render_markdown(report),
        ReportFormat::Csv => render_csv(report),
    }
}

fn render_markdown(report: &ConvergenceReport) -> String {
    let norms = report.norms();
    let mut out = String::from("| h |");
    for n in norms {
        write!(out, " {} | rate |", n.symbol()).unwrap();
    }
    out.push_str("\n|---|");
    out.push_str(&"---:|---:|".repeat(norms.len()));
    out.push('\n');
    for (i, r) in report.records.iter().enumerate() {
        write!(out, "| {} |", h_label(r)).unwrap();
        for n in norms {
            let rate = match i {
                0 => "--".to_string(),
                _ => format!("{:.2}", report.rates[n][i - 1]),
            };
            write!(out, " {:.2e} | {} |", r.norms[n], rate).unwrap();
        }
        out.push('\n');
    }
    out
}

fn render_csv(report: &ConvergenceReport) -> String {
    let norms = report.norms();
    let mut out = String::from("level,h");
    for n in norms {
        write!(out, ",{0},rate_{0}", n.label()).unwrap();
    }
    out.push_str(",iterations,wall_seconds\n");
    for (i, r) in report.records.iter().enumerate() {
        write!(out, "{},{:e}", r.level, r.h).unwrap();
        for n in norms {
            let rate = if i == 0 { String::new() } else { format!("{:e}", report.rates[n][i - 1]) };
            write!(out, ",{:e},{}", r.norms[n], rate).unwrap();
        }
        writeln!(out, ",{},{:e}", r.iterations, r.wall_time).unwrap();
    }
    out
}

/// Read back the per-level records of a CSV report.
pub fn parse_csv_report(text: &str) -> Result<Vec<ErrorRecord>> {
    let bad = DecError::MalformedReport;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty report".into()))?.split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let (lc, hc) = (col("level"), col("h"));
    let (Some(lc), Some(hc)) = (lc, hc) else {
        return Err(bad("missing level or h column".into()));
    };
    let norm_cols: Vec<(NormKind, usize)> = NormKind::ALL.iter().filter_map(|&n| Some((n, col(n.label())?))).collect();
    let (ic, wc) = (col("iterations"), col("wall_seconds"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| bad(format!("`{s}`: {e}")));
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != header.len() {
                return Err(bad(format!("row has {} fields, header {}", f.len(), header.len())));
            }
            Ok(ErrorRecord {
                level: f[lc].trim().parse().map_err(|e| bad(format!("level: {e}")))?,
                h: num(f[hc])?,
                norms: norm_cols.iter().map(|&(n, c)| Ok((n, num(f[c])?))).collect::<Result<_>>()?,
                iterations: ic.map(|c| f[c].trim().parse().unwrap_or(0)).unwrap_or(0),
                wall_time: wc.map(|c| num(f[c])).transpose()?.unwrap_or(0.0),
            })
        })
        .collect()
}

/// Outcome of one diagnostic check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    /// `None` when there was nothing to test.
    pub passed: Option<bool>,
    pub value: f64,
    pub tolerance: f64,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "VACUOUS",
        };
        write!(f, "{status:7} {:<40} {:.3e} (tol {:.1e})", self.name, self.value, self.tolerance)
    }
}

#[derive(Clone, Debug)]
pub struct Diagnostics {
    pub k: usize,
    pub checks: Vec<Check>,
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "diagnostics for k = {}", self.k)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

pub const CENTROID_TOL: f64 = 1e-12;
pub const KERNEL_TOL: f64 = 1e-11;
pub const COMMUTING_TOL: f64 = 1e-10;

fn constant_form(k: usize) -> PolyForm {
    match k {
        0 => PolyForm::zero_form(Poly2::constant(2.5)),
        1 => PolyForm::one_form(Poly2::constant(1.5), Poly2::constant(-0.7)),
        _ => PolyForm::two_form(Poly2::constant(-3.0)),
    }
}

fn linear_form(k: usize) -> PolyForm {
    let c = forms::domain_center();
    match k {
        0 => PolyForm::zero_form(Poly2::affine_about(c, 0.4, 1.3, -0.9)),
        1 => PolyForm::one_form(Poly2::affine_about(c, 0.2, 0.7, 1.1), Poly2::affine_about(c, -0.5, -0.8, 0.3)),
        _ => PolyForm::two_form(Poly2::affine_about(c, 1.0, -0.6, 1.4)),
    }
}

fn relative(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

fn interior_norm(complex: &SimplicialComplex, dual: &DualComplex, c: &Cochain) -> Result<f64> {
    let k = c.degree();
    let vals = c
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| if complex.is_boundary(k, i) { 0.0 } else { *v })
        .collect();
    operators::discrete_norm(dual, &Cochain::new(k, vals))
}

/// Centroid condition, the `Π - J` kernel on constant and linear forms,
/// and the commuting property `δ_h J = J δ`.
pub fn diagnostics(complex: &SimplicialComplex, dual: &DualComplex, k: usize) -> Result<Diagnostics> {
    let n = complex.dim();
    if k > n {
        return Err(DecError::DegreeOutOfRange { k, n });
    }
    let interior = (0..complex.count(k)).filter(|&i| !complex.is_boundary(k, i)).count();
    let mut checks = Vec::new();

    let (ok, dev) = dual::check_centroid_condition(complex, dual, k, CENTROID_TOL);
    checks.push(Check {
        name: format!("centroid condition on interior {k}-simplices"),
        passed: (interior > 0).then_some(ok),
        value: dev,
        tolerance: CENTROID_TOL,
    });

    let cf = constant_form(k);
    let resid = operators::discrete_norm(dual, &operators::pi_minus_j(complex, dual, &cf)?)?;
    let scale = operators::discrete_norm(dual, &forms::de_rham(complex, &cf)?)?;
    let rel = relative(resid, scale);
    checks.push(Check {
        name: "(Π - J) on a constant form".into(),
        passed: Some(rel <= KERNEL_TOL),
        value: rel,
        tolerance: KERNEL_TOL,
    });

    let lf = linear_form(k);
    let resid = interior_norm(complex, dual, &operators::pi_minus_j(complex, dual, &lf)?)?;
    let scale = operators::discrete_norm(dual, &forms::de_rham(complex, &lf)?)?;
    let rel = relative(resid, scale);
    checks.push(Check {
        name: "(Π - J) on a linear form, interior".into(),
        passed: (interior > 0).then_some(rel <= KERNEL_TOL),
        value: rel,
        tolerance: KERNEL_TOL,
    });

    if k > 0 {
        let u = forms::manufactured_solution(k)?;
        let resid = operators::commuting_j_check(complex, dual, &u)?;
        let scale = operators::discrete_norm(dual, &operators::j_interpolant(complex, dual, &forms::codifferential(&u)?)?)?;
        let rel = relative(resid, scale);
        let interior_faces = (0..complex.count(k - 1)).filter(|&i| !complex.is_boundary(k - 1, i)).count();
        checks.push(Check {
            name: "commuting δ_h J = J δ, interior".into(),
            passed: (interior_faces > 0).then_some(rel <= COMMUTING_TOL),
            value: rel,
            tolerance: COMMUTING_TOL,
        });
    }
    Ok(Diagnostics { k, checks })
}

fn poly_residual(p: &Poly2, scale: f64) -> f64 {
    p.max_coefficient() / scale.max(f64::MIN_POSITIVE)
}

/// Invariant suite for smooth forms and quadrature on fixed inputs.
pub fn forms_selftest() -> Result<Vec<Check>> {
    let c = forms::domain_center();
    let (x, y) = (Poly2::x_about(c), Poly2::y_about(c));
    let u = forms::manufactured_scalar();
    let samples = [
        u.clone(),
        &(&(&(&x * &x) * &y) - &y.powi(3).scale(2.0)) + &Poly2::constant(0.5),
        (&x * &y).powi(3),
    ];
    let mut checks = Vec::new();
    let mut push = |name: &str, value: f64, tol: f64| {
        checks.push(Check {
            name: name.into(),
            passed: Some(value <= tol),
            value,
            tolerance: tol,
        })
    };

    let mut dd: f64 = 0.0;
    let mut deltadelta: f64 = 0.0;
    let mut star: f64 = 0.0;
    for p in &samples {
        let scale = p.max_coefficient();
        let d0 = forms::exterior_derivative(&PolyForm::zero_form(p.clone()))?;
        dd = dd.max(poly_residual(&forms::exterior_derivative(&d0)?.components()[0], scale));
        let d2 = forms::codifferential(&PolyForm::two_form(p.clone()))?;
        deltadelta = deltadelta.max(poly_residual(&forms::codifferential(&d2)?.components()[0], scale));
        for f in [PolyForm::zero_form(p.clone()), PolyForm::one_form(p.clone(), p.scale(-0.5)), PolyForm::two_form(p.clone())] {
            let back = forms::hodge_star_inverse(&forms::hodge_star(&f)).sub(&f)?;
            star = star.max(back.components().iter().map(|q| poly_residual(q, scale)).fold(0.0, f64::max));
        }
    }
    push("d∘d = 0 on 0-forms", dd, 1e-13);
    push("δ∘δ = 0 on 2-forms", deltadelta, 1e-13);
    push("⋆⁻¹⋆ = id", star, 0.0);

    let r2 = &(&x * &x) + &(&y * &y);
    let lap = forms::hodge_laplacian_smooth(&PolyForm::zero_form(r2));
    push("Δ(x² + y²) = -4", (&lap.components()[0] + &Poly2::constant(4.0)).max_coefficient(), 1e-14);

    let rule = crate::quadrature::QuadratureRule::triangle(20);
    let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
    let mut quad: f64 = 0.0;
    for a in 0..=20 {
        for b in 0..=20 - a {
            let got: f64 = rule.iter().map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32)).sum();
            let exact = fact(a) * fact(b) / fact(a + b + 2);
            quad = quad.max((got - exact).abs() / exact);
        }
    }
    push("triangle quadrature, degree ≤ 20", quad, 1e-13);

    // Stokes on the model domain: ∫ dω = ∮ ω
    let w = PolyForm::one_form(&(&x * &y) + &y.powi(2), &x.powi(3) - &y);
    let v = forms::domain_vertices();
    let area = forms::integrate_over_simplex(&forms::exterior_derivative(&w)?, &[&v[0], &v[1], &v[2]])?;
    let boundary: f64 = [(0, 1), (1, 2), (2, 0)]
        .iter()
        .map(|&(i, j)| forms::integrate_over_simplex(&w, &[&v[i], &v[j]]))
        .sum::<Result<f64>>()?;
    push("Stokes ∫dω = ∮ω on the domain", (area - boundary).abs() / area.abs().max(1.0), 1e-13);
    Ok(checks)
}

/// CSV of primal and dual volumes for every simplex of every dimension.
pub fn dual_report_csv(complex: &SimplicialComplex, dual: &DualComplex) -> String {
    let mut out = String::from("dim,simplex_id,primal_volume,dual_volume,ratio_a,is_boundary\n");
    for k in 0..=complex.dim() {
        let (p, d, a) = (dual.primal_volumes(k), dual.dual_volumes(k), dual.ratio_a(k));
        for i in 0..complex.count(k) {
            writeln!(out, "{k},{i},{:e},{:e},{:e},{}", p[i], d[i], a[i], complex.is_boundary(k, i)).unwrap();
        }
    }
    out
}

fn dump_matrix(out: &mut String, name: &str, m: &SparseMatrix) {
    writeln!(out, "# {name} {} {} {}", m.rows(), m.cols(), m.nnz()).unwrap();
    for (r, c, v) in m.triplets() {
        writeln!(out, "{r} {c} {v:e}").unwrap();
    }
}

/// Coordinate-format dump of the operators acting on `k`-cochains.
pub fn operator_dump(complex: &SimplicialComplex, dual: &DualComplex, k: usize) -> Result<String> {
    let n = complex.dim();
    if k > n {
        return Err(DecError::DegreeOutOfRange { k, n });
    }
    let mut out = String::new();
    if k < n {
        dump_matrix(&mut out, &format!("D{k}"), &complex.coboundary_matrix(k)?);
    }
    dump_matrix(&mut out, &format!("star{k}"), &operators::DiagonalHodge::new(dual, k).matrix());
    if k > 0 {
        dump_matrix(&mut out, &format!("delta{k}"), &operators::codifferential_matrix(complex, dual, k)?);
    }
    dump_matrix(&mut out, &format!("laplacian{k}"), &operators::hodge_laplacian_matrix(complex, dual, k)?);
    dump_matrix(&mut out, &format!("system{k}"), &operators::system_matrix(complex, dual, k)?);
    Ok(out)
}
