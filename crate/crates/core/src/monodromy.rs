//! Numeric monodromy of `∂ₓW = A(x, τ)·W` along closed loops, sampled over a
//! grid of parameter values, and a comparison with the symbolic
//! isomonodromy verdict.
//!
//! Parameters are substituted exactly and converted to `f64` only when the
//! entries of `A` are compiled for evaluation. Monodromy matrices depend on
//! the base point and the chosen fundamental solution, so only the
//! coefficients of their characteristic polynomials are compared.

use std::f64::consts::PI;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rat::{Var, Vars};
use crate::systems::{isomonodromy_verdict, AnsatzBounds, IsomonodromyVerdict};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_EPS: f64 = 1e-6;
/// Minimal distance between the loop and any pole of `A(·, τ)`.
pub const CLEARANCE: f64 = 1e-3;
const MIN_STEP: f64 = 1e-12;
const MAX_STEPS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum LoopShape {
    Circle { center: Complex64, radius: f64, segments: usize },
    /// Closed polyline through the vertices, returning to the first one.
    Polyline(Vec<Complex64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoopSpec {
    pub shape: LoopShape,
    pub clockwise: bool,
}

/// One piece of a path, parameterized over `s ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Piece {
    Arc { center: Complex64, radius: f64, from: f64, sweep: f64 },
    Line { from: Complex64, to: Complex64 },
}

impl Piece {
    fn point(&self, s: f64) -> Complex64 {
        match *self {
            Piece::Arc { center, radius, from, sweep } => {
                center + Complex64::from_polar(radius, from + s * sweep)
            }
            Piece::Line { from, to } => from + (to - from) * s,
        }
    }

    fn velocity(&self, s: f64) -> Complex64 {
        match *self {
            Piece::Arc { radius, from, sweep, .. } => {
                Complex64::i() * sweep * Complex64::from_polar(radius, from + s * sweep)
            }
            Piece::Line { from, to } => to - from,
        }
    }

    fn distance(&self, p: Complex64) -> f64 {
        match *self {
            Piece::Arc { center, radius, from, sweep } => {
                let d = p - center;
                // Closest point on the full circle, if it lies on this arc.
                let mut best = f64::INFINITY;
                if d.norm() > 0.0 {
                    let angle = d.arg();
                    let (lo, hi) = if sweep >= 0.0 { (from, from + sweep) } else { (from + sweep, from) };
                    let mut a = angle;
                    while a < lo {
                        a += 2.0 * PI;
                    }
                    while a > hi + 2.0 * PI {
                        a -= 2.0 * PI;
                    }
                    if a <= hi {
                        best = (d.norm() - radius).abs();
                    }
                } else {
                    best = radius;
                }
                best.min((p - self.point(0.0)).norm()).min((p - self.point(1.0)).norm())
            }
            Piece::Line { from, to } => {
                let v = to - from;
                let len2 = v.norm_sqr();
                let s = if len2 == 0.0 {
                    0.0
                } else {
                    (((p - from) * v.conj()).re / len2).clamp(0.0, 1.0)
                };
                (p - (from + v * s)).norm()
            }
        }
    }
}

impl LoopSpec {
    pub fn circle(center: Complex64, radius: f64, segments: usize) -> Self {
        LoopSpec { shape: LoopShape::Circle { center, radius, segments }, clockwise: false }
    }

    pub fn reversed(&self) -> Self {
        LoopSpec { shape: self.shape.clone(), clockwise: !self.clockwise }
    }

    pub fn base_point(&self) -> Complex64 {
        match &self.shape {
            LoopShape::Circle { center, radius, .. } => center + radius,
            LoopShape::Polyline(v) => v[0],
        }
    }

    fn pieces(&self) -> Result<Vec<Piece>> {
        let pieces = match &self.shape {
            LoopShape::Circle { center, radius, segments } => {
                if *segments == 0 || !(*radius > 0.0) {
                    return Err(Error::Schema("loop needs a positive radius and segment count".into()));
                }
                let sign = if self.clockwise { -1.0 } else { 1.0 };
                let sweep = sign * 2.0 * PI / *segments as f64;
                (0..*segments)
                    .map(|k| Piece::Arc { center: *center, radius: *radius, from: k as f64 * sweep, sweep })
                    .collect()
            }
            LoopShape::Polyline(v) => {
                if v.len() < 2 {
                    return Err(Error::Schema("polyline loop needs at least two points".into()));
                }
                let mut pts = v.clone();
                pts.push(v[0]);
                if self.clockwise {
                    pts.reverse();
                }
                pts.windows(2)
                    .filter(|w| w[0] != w[1])
                    .map(|w| Piece::Line { from: w[0], to: w[1] })
                    .collect()
            }
        };
        Ok(pieces)
    }
}

impl FromStr for LoopSpec {
    type Err = Error;

    /// `center=0,radius=1,segments=64` or `points=1;1i;-1;-1i`, optionally
    /// followed by `,orientation=cw`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse { pos: 0, msg };
        let mut center = Complex64::zero();
        let mut radius = 1.0;
        let mut segments = 64;
        let mut points = None;
        let mut clockwise = false;
        for field in s.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value in loop spec, got `{field}`")))?;
            let value = value.trim();
            match key.trim() {
                "center" => center = parse_complex(value)?,
                "radius" => radius = value.parse().map_err(|_| bad(format!("bad radius `{value}`")))?,
                "segments" => {
                    segments = value.parse().map_err(|_| bad(format!("bad segment count `{value}`")))?
                }
                "points" => {
                    points = Some(value.split(';').map(|p| parse_complex(p.trim())).collect::<Result<Vec<_>>>()?)
                }
                "orientation" => {
                    clockwise = match value {
                        "cw" => true,
                        "ccw" => false,
                        _ => return Err(bad(format!("orientation must be cw or ccw, got `{value}`"))),
                    }
                }
                other => return Err(bad(format!("unknown loop field `{other}`"))),
            }
        }
        let shape = match points {
            Some(p) => LoopShape::Polyline(p),
            None => LoopShape::Circle { center, radius, segments },
        };
        Ok(LoopSpec { shape, clockwise })
    }
}

fn parse_complex(s: &str) -> Result<Complex64> {
    Complex64::from_str(s).map_err(|_| Error::Parse { pos: 0, msg: format!("bad complex number `{s}`") })
}

/// Exact decimal (`0.25`, `-3`) or fraction (`1/3`); exponent notation is rejected.
pub fn parse_exact_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse { pos: 0, msg: format!("bad number `{s}`") };
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty()) || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let q = BigRational::new(digits, BigInt::from(10).pow(frac.len() as u32));
    Ok(if neg { -q } else { q })
}

/// Parameter values to sample: the cartesian product of one axis per
/// parameter, first axis varying slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub axes: Vec<(Var, Vec<BigRational>)>,
}

impl Grid {
    /// Axes like `t=0.1:0.9:5` (inclusive, evenly spaced) or `t=0.3,0.6,0.9`,
    /// separated by `;`. Every parameter needs an axis.
    pub fn parse(specs: &[&str], vars: &Vars) -> Result<Grid> {
        let bad = |msg: String| Error::Parse { pos: 0, msg };
        let mut axes: Vec<(Var, Vec<BigRational>)> = Vec::new();
        for spec in specs.iter().flat_map(|s| s.split(';')).map(str::trim).filter(|s| !s.is_empty()) {
            let (name, range) = spec
                .split_once('=')
                .ok_or_else(|| bad(format!("expected name=range in grid, got `{spec}`")))?;
            let v = vars.var(name.trim())?;
            if v.is_main() {
                return Err(bad("the grid ranges over parameters only".into()));
            }
            if axes.iter().any(|(w, _)| *w == v) {
                return Err(bad(format!("parameter `{}` appears twice in the grid", name.trim())));
            }
            let values = if range.contains(':') {
                let parts: Vec<&str> = range.split(':').collect();
                if parts.len() != 3 {
                    return Err(bad(format!("expected start:end:count, got `{range}`")));
                }
                let start = parse_exact_decimal(parts[0])?;
                let end = parse_exact_decimal(parts[1])?;
                let count: usize = parts[2]
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("bad count `{}`", parts[2])))?;
                match count {
                    0 => return Err(bad("grid count must be positive".into())),
                    1 => vec![start],
                    _ => {
                        let step = (&end - &start) / BigRational::from_integer((count - 1).into());
                        (0..count)
                            .map(|k| &start + &step * BigRational::from_integer(k.into()))
                            .collect()
                    }
                }
            } else {
                range.split(',').map(parse_exact_decimal).collect::<Result<Vec<_>>>()?
            };
            axes.push((v, values));
        }
        for p in vars.params() {
            if !axes.iter().any(|(v, _)| *v == p) {
                return Err(bad(format!("grid has no axis for parameter `{}`", vars.name(p))));
            }
        }
        axes.sort_by_key(|(v, _)| *v);
        Ok(Grid { axes })
    }

    /// Each parameter on `0.1:0.9:5`.
    pub fn default_for(vars: &Vars) -> Grid {
        let values: Vec<BigRational> = (1..=5)
            .map(|k| BigRational::new((2 * k - 1).into(), 10.into()))
            .collect();
        Grid { axes: vars.params().map(|v| (v, values.clone())).collect() }
    }

    pub fn points(&self) -> Vec<Vec<(Var, BigRational)>> {
        let mut out = vec![Vec::new()];
        for (v, values) in &self.axes {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |q| {
                        let mut p = prefix.clone();
                        p.push((*v, q.clone()));
                        p
                    })
                })
                .collect();
        }
        out
    }
}

/// `A(·, τ)` as complex coefficient vectors in `x`.
struct Compiled {
    n: usize,
    /// `(numerator, denominator)` coefficients, low degree first; `None` for zero.
    entries: Vec<Option<(Vec<Complex64>, Vec<Complex64>)>>,
}

fn to_complex_coeffs(p: &crate::poly::Poly) -> Vec<Complex64> {
    p.to_univariate(Var::MAIN.0)
        .iter()
        .map(|c| {
            let q = c.constant_value().expect("x-only after substitution");
            Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
        })
        .collect()
}

fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * x + c)
}

impl Compiled {
    fn new(a: &Matrix, tau: &[(Var, BigRational)], vars: &Vars) -> Result<Compiled> {
        let mut entries = Vec::with_capacity(a.rows() * a.cols());
        for e in a.entries() {
            let mut f = e.clone();
            for (v, q) in tau {
                f = f.substitute(*v, q).map_err(|_| {
                    Error::EvalError(format!("denominator vanishes at {} = {q}", vars.name(*v)))
                })?;
            }
            if f.vars().iter().any(|v| !v.is_main()) {
                return Err(Error::EvalError("parameter values do not cover every parameter".into()));
            }
            entries.push(if f.is_zero() {
                None
            } else {
                Some((to_complex_coeffs(f.numer()), to_complex_coeffs(f.denom())))
            });
        }
        Ok(Compiled { n: a.rows(), entries })
    }

    fn poles(&self) -> Vec<Complex64> {
        self.entries
            .iter()
            .flatten()
            .flat_map(|(_, d)| polynomial_roots(d))
            .collect()
    }

    /// `A(x)·W`, row-major.
    fn apply(&self, x: Complex64, w: &[Complex64], scale: Complex64, out: &mut [Complex64]) {
        let n = self.n;
        let a: Vec<Complex64> = self
            .entries
            .iter()
            .map(|e| match e {
                Some((num, den)) => horner(num, x) / horner(den, x) * scale,
                None => Complex64::zero(),
            })
            .collect();
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::zero();
                for k in 0..n {
                    acc += a[i * n + k] * w[k * n + j];
                }
                out[i * n + j] = acc;
            }
        }
    }
}

/// Roots of a complex polynomial (low degree first) by Durand–Kerner.
fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
    if deg == 1 {
        return vec![-monic[0]];
    }
    let bound = 1.0 + monic[..deg].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32) * bound).collect();
    for _ in 0..2000 {
        let mut change: f64 = 0.0;
        for i in 0..deg {
            let num = horner(&monic, roots[i]);
            let den = (0..deg)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (roots[i] - roots[j]));
            if den.norm() == 0.0 {
                roots[i] += Complex64::new(1e-9, 1e-9);
                change = f64::INFINITY;
                continue;
            }
            let delta = num / den;
            roots[i] -= delta;
            change = change.max(delta.norm());
        }
        if change < 1e-15 * bound {
            break;
        }
    }
    roots
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Propagates `w` along one piece with adaptive steps.
fn integrate_piece(sys: &Compiled, piece: &Piece, w: &mut Vec<Complex64>, tol: f64) -> Result<()> {
    let len = w.len();
    let f = |s: f64, y: &[Complex64], out: &mut [Complex64]| {
        sys.apply(piece.point(s), y, piece.velocity(s), out)
    };
    let mut k: Vec<Vec<Complex64>> = vec![vec![Complex64::zero(); len]; 7];
    let mut tmp = vec![Complex64::zero(); len];
    let mut s = 0.0;
    let mut h: f64 = 0.05;
    let mut steps = 0;
    f(s, w, &mut k[0]);
    while s < 1.0 {
        if steps >= MAX_STEPS {
            return Err(Error::EvalError("step budget exhausted".into()));
        }
        steps += 1;
        h = h.min(1.0 - s);
        for stage in 1..7 {
            for i in 0..len {
                let mut acc = w[i];
                for (j, kj) in k.iter().enumerate().take(stage) {
                    if A[stage][j] != 0.0 {
                        acc += kj[i] * (h * A[stage][j]);
                    }
                }
                tmp[i] = acc;
            }
            f(s + C[stage] * h, &tmp, &mut k[stage]);
        }
        // tmp holds the fifth-order solution (FSAL: stage 7 is evaluated there).
        let mut err_sq = 0.0;
        for i in 0..len {
            let mut e = Complex64::zero();
            for st in 0..7 {
                e += k[st][i] * (h * (B5[st] - B4[st]));
            }
            let scale = tol + tol * w[i].norm().max(tmp[i].norm());
            err_sq += (e.norm() / scale).powi(2);
        }
        let err = (err_sq / len as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::EvalError("non-finite value during integration".into()));
        }
        if err <= 1.0 {
            s += h;
            w.copy_from_slice(&tmp);
            let last = k[6].clone();
            k[0] = last;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < MIN_STEP && s < 1.0 {
            return Err(Error::PathTooClose("step size collapsed near a singularity".into()));
        }
    }
    Ok(())
}

/// Complex `n × n` matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Complex64::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        CMatrix { n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut data = vec![Complex64::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        CMatrix { n, data }
    }

    /// Largest entry modulus of the difference.
    pub fn distance(&self, other: &CMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `[c_{n−1}, …, c_0]` with `det(zI − M) = zⁿ + c_{n−1}z^{n−1} + … + c_0`,
    /// by Faddeev–LeVerrier.
    pub fn charpoly(&self) -> Vec<Complex64> {
        let n = self.n;
        let mut coeffs = Vec::with_capacity(n);
        let mut m = CMatrix { n, data: vec![Complex64::zero(); n * n] };
        let mut c = Complex64::new(1.0, 0.0);
        for k in 1..=n {
            for i in 0..n {
                m.data[i * n + i] += c;
            }
            m = self.mul(&m);
            let tr: Complex64 = (0..n).map(|i| m.data[i * n + i]).sum();
            c = -tr / k as f64;
            coeffs.push(c);
        }
        coeffs
    }

    fn to_json(&self) -> Value {
        json!((0..self.n)
            .map(|i| (0..self.n).map(|j| {
                let z = self.get(i, j);
                json!([z.re, z.im])
            }).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

/// Transfer matrix along the loop, normalized so that it starts at the
/// identity.
pub fn integrate_transfer(
    a: &Matrix,
    vars: &Vars,
    tau: &[(Var, BigRational)],
    path: &LoopSpec,
    tol: f64,
) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    let sys = Compiled::new(a, tau, vars)?;
    let pieces = path.pieces()?;
    for p in sys.poles() {
        if let Some(d) = pieces.iter().map(|pc| pc.distance(p)).reduce(f64::min) {
            if d < CLEARANCE {
                return Err(Error::PathTooClose(format!(
                    "pole {} lies {d:.2e} from the loop (clearance {CLEARANCE:e})",
                    p
                )));
            }
        }
    }
    let mut w = CMatrix::identity(a.rows()).data;
    for piece in &pieces {
        integrate_piece(&sys, piece, &mut w, tol)?;
    }
    Ok(CMatrix { n: a.rows(), data: w })
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScanVerdict {
    ConsistentWithIsomonodromy { eps: f64 },
    VariesWithParameter,
}

impl ScanVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ScanVerdict::ConsistentWithIsomonodromy { .. } => "ConsistentWithIsomonodromy",
            ScanVerdict::VariesWithParameter => "VariesWithParameter",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub tau: Vec<(Var, BigRational)>,
    pub outcome: std::result::Result<(CMatrix, Vec<Complex64>), Error>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyReport {
    /// Ordered by grid index.
    pub samples: Vec<Sample>,
    pub spread: f64,
    pub verdict: ScanVerdict,
}

impl MonodromyReport {
    pub fn to_json(&self, vars: &Vars) -> Value {
        let samples: Vec<Value> = self
            .samples
            .iter()
            .map(|s| {
                let tau: serde_json::Map<String, Value> = s
                    .tau
                    .iter()
                    .map(|(v, q)| (vars.name(*v).to_string(), json!(q.to_string())))
                    .collect();
                match &s.outcome {
                    Ok((m, inv)) => json!({
                        "tau": tau,
                        "monodromy": m.to_json(),
                        "invariants": inv.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
                    }),
                    Err(e) => json!({ "tau": tau, "error": e.to_string() }),
                }
            })
            .collect();
        let mut out = json!({
            "verdict": self.verdict.name(),
            "spread": self.spread,
            "samples": samples,
        });
        if let ScanVerdict::ConsistentWithIsomonodromy { eps } = self.verdict {
            out["eps"] = json!(eps);
        }
        out
    }
}

/// Integrates over every grid point (concurrently) and compares the
/// characteristic-polynomial coefficients. The verdict is
/// `ConsistentWithIsomonodromy` when the spread is at most
/// `eps · max(1, largest invariant norm)`.
pub fn monodromy_scan(
    a: &Matrix,
    vars: &Vars,
    path: &LoopSpec,
    grid: &Grid,
    tol: f64,
    eps: f64,
) -> Result<MonodromyReport> {
    let points = grid.points();
    if points.is_empty() || grid.axes.iter().any(|(_, v)| v.is_empty()) {
        return Err(Error::Schema("empty parameter grid".into()));
    }
    let samples: Vec<Sample> = points
        .into_par_iter()
        .map(|tau| {
            let outcome = integrate_transfer(a, vars, &tau, path, tol).map(|m| {
                let inv = m.charpoly();
                (m, inv)
            });
            Sample { tau, outcome }
        })
        .collect();
    let invariants: Vec<&Vec<Complex64>> = samples
        .iter()
        .filter_map(|s| s.outcome.as_ref().ok().map(|(_, inv)| inv))
        .collect();
    if invariants.is_empty() {
        let first = samples[0].outcome.clone().expect_err("all samples failed");
        return Err(first);
    }
    let dist = |u: &[Complex64], v: &[Complex64]| -> f64 {
        u.iter().zip(v).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    };
    let mut spread: f64 = 0.0;
    for (i, u) in invariants.iter().enumerate() {
        for v in &invariants[i + 1..] {
            spread = spread.max(dist(u, v));
        }
    }
    let scale = invariants
        .iter()
        .map(|u| u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(1.0, f64::max);
    let verdict = if spread <= eps * scale {
        ScanVerdict::ConsistentWithIsomonodromy { eps }
    } else {
        ScanVerdict::VariesWithParameter
    };
    Ok(MonodromyReport { samples, spread, verdict })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    /// Numeric constancy with no symbolic completion found: the ansatz is
    /// bounded, so nothing follows.
    Inconclusive,
    /// Symbolic witnesses exist but the monodromy varies.
    Defect,
}

impl Agreement {
    pub fn name(self) -> &'static str {
        match self {
            Agreement::Agree => "Agree",
            Agreement::Inconclusive => "Inconclusive",
            Agreement::Defect => "Defect",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossCheck {
    pub symbolic: IsomonodromyVerdict,
    pub numeric: MonodromyReport,
    pub agreement: Agreement,
}

impl CrossCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "symbolic": self.symbolic.as_str(),
            "numeric": self.numeric.verdict.name(),
            "agreement": self.agreement.name(),
            "spread": self.numeric.spread,
        })
    }
}

pub fn cross_check(
    a: &Matrix,
    vars: &Vars,
    bounds: &AnsatzBounds,
    path: &LoopSpec,
    grid: &Grid,
    tol: f64,
    eps: f64,
) -> Result<CrossCheck> {
    let symbolic = isomonodromy_verdict(a, vars, bounds)?;
    let numeric = monodromy_scan(a, vars, path, grid, tol, eps)?;
    let consistent = matches!(numeric.verdict, ScanVerdict::ConsistentWithIsomonodromy { .. });
    let agreement = match (symbolic.is_isomonodromic(), consistent) {
        (true, true) | (false, false) => Agreement::Agree,
        (true, false) => Agreement::Defect,
        (false, true) => Agreement::Inconclusive,
    };
    Ok(CrossCheck { symbolic, numeric, agreement })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expr;

    fn scalar(s: &str, vars: &Vars) -> Matrix {
        Matrix::from_rows(vec![vec![parse_expr(s, vars).unwrap()]])
    }
    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn half_integer_exponent() {
        let vars = Vars::with_params(&["t"]);
        let a = scalar("t/x", &vars);
        let m = integrate_transfer(&a, &vars, &[(Var(1), q(1, 2))], &LoopSpec::circle(0.0.into(), 1.0, 64), DEFAULT_TOL)
            .unwrap();
        assert!((m.get(0, 0) + 1.0).norm() < 1e-6, "{:?}", m);
    }

    #[test]
    fn closed_form_exponents() {
        let vars = Vars::with_params(&["t"]);
        let a = scalar("t/x", &vars);
        for (n, d) in [(3, 10), (7, 10), (-5, 4)] {
            let m = integrate_transfer(&a, &vars, &[(Var(1), q(n, d))], &LoopSpec::circle(0.0.into(), 2.0, 16), DEFAULT_TOL)
                .unwrap();
            let expected = Complex64::from_polar(1.0, 2.0 * PI * n as f64 / d as f64);
            assert!((m.get(0, 0) - expected).norm() < 1e-7);
        }
        // Not enclosing the pole.
        let m = integrate_transfer(&a, &vars, &[(Var(1), q(1, 3))], &LoopSpec::circle(Complex64::new(3.0, 0.0), 1.0, 32), DEFAULT_TOL)
            .unwrap();
        assert!((m.get(0, 0) - 1.0).norm() < 1e-8);
    }

    #[test]
    fn scans() {
        let vars = Vars::with_params(&["t"]);
        let grid = Grid::parse(&["t=0.3,0.6,0.9"], &vars).unwrap();
        let path = LoopSpec::circle(0.0.into(), 1.0, 64);
        let r = monodromy_scan(&scalar("t/x", &vars), &vars, &path, &grid, DEFAULT_TOL, DEFAULT_EPS).unwrap();
        assert_eq!(r.verdict, ScanVerdict::VariesWithParameter);
        let r = monodromy_scan(&scalar("1/x", &vars), &vars, &path, &grid, DEFAULT_TOL, DEFAULT_EPS).unwrap();
        assert_eq!(r.verdict.name(), "ConsistentWithIsomonodromy");
    }

    #[test]
    fn pole_on_path() {
        let vars = Vars::with_params(&["t"]);
        let a = scalar("t/(x-1)", &vars);
        let err = integrate_transfer(&a, &vars, &[(Var(1), q(1, 2))], &LoopSpec::circle(0.0.into(), 1.0, 8), DEFAULT_TOL);
        assert!(matches!(err, Err(Error::PathTooClose(_))));
        let a = scalar("1/(t*x - 1)", &vars);
        let err = integrate_transfer(&a, &vars, &[(Var(1), q(0, 1))], &LoopSpec::circle(0.0.into(), 1.0, 8), DEFAULT_TOL);
        assert!(err.is_ok());
        let a = scalar("x/t", &vars);
        let err = integrate_transfer(&a, &vars, &[(Var(1), q(0, 1))], &LoopSpec::circle(0.0.into(), 1.0, 8), DEFAULT_TOL);
        assert!(matches!(err, Err(Error::EvalError(_))));
    }

    #[test]
    fn parsing() {
        let vars = Vars::with_params(&["t", "s"]);
        let g = Grid::parse(&["t=0.1:0.9:5", "s=1/3"], &vars).unwrap();
        assert_eq!(g.axes[0].1[1], q(3, 10));
        assert_eq!(g.points().len(), 5);
        assert!(Grid::parse(&["t=0.1:0.9:5"], &vars).is_err());
        assert_eq!(parse_exact_decimal("-0.125").unwrap(), q(-1, 8));
        assert!(parse_exact_decimal("1e-3").is_err());
        let l: LoopSpec = "center=1+1i,radius=0.5,segments=8,orientation=cw".parse().unwrap();
        assert_eq!(l.shape, LoopShape::Circle { center: Complex64::new(1.0, 1.0), radius: 0.5, segments: 8 });
        assert!(l.clockwise);
        let l: LoopSpec = "points=1;1i;-1;-1i".parse().unwrap();
        assert_eq!(l.base_point(), Complex64::new(1.0, 0.0));
        assert_eq!(CMatrix { n: 2, data: vec![1.0.into(), 2.0.into(), 3.0.into(), 4.0.into()] }.charpoly(),
            vec![Complex64::new(-5.0, 0.0), Complex64::new(-2.0, 0.0)]);
    }

    #[test]
    fn polynomial_roots_found() {
        let r = polynomial_roots(&[2.0.into(), 0.0.into(), 1.0.into()]);
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z.norm() - 2f64.sqrt()).abs() < 1e-12);
        }
    }
}
