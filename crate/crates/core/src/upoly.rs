//! Dense univariate polynomials whose coefficients are parameter-only
//! rational functions, plus root finding in the parameter field ℚ(t₁..tₘ).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::Poly;
use crate::rat::{Rat, Var};

/// `Σ coeffs[k] · z^k` with coefficients free of the main variable.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly::default()
    }

    pub fn one() -> Self {
        UPoly::new(vec![Rat::one()])
    }

    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::new(vec![c])
    }

    /// `z - c`
    pub fn linear(c: &Rat) -> Self {
        UPoly::new(vec![-c, Rat::one()])
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        UPoly::new(v)
    }

    /// Splits a rational function into numerator and denominator
    /// polynomials in the main variable.
    pub fn split_rat(f: &Rat) -> (UPoly, UPoly) {
        (UPoly::from_poly(f.numer()), UPoly::from_poly(f.denom()))
    }

    pub fn from_poly(p: &Poly) -> Self {
        UPoly::new(
            p.to_univariate(Var::MAIN.0)
                .into_iter()
                .map(Rat::from_poly)
                .collect(),
        )
    }

    /// The rational function obtained by reading `z` as variable `v`.
    pub fn to_rat(&self, v: Var) -> Rat {
        self.eval(&Rat::var(v))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new((0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UPoly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: usize) -> UPoly {
        (0..e).fold(UPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Euclidean division. Panics if `d` is zero.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.coeffs.len() - 1;
        let inv = d.lc().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let q = &rem[k] * &inv;
            if !q.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    let idx = k - dd + i;
                    rem[idx] = &rem[idx] - &(&q * c);
                }
            }
            quot[k - dd] = q;
            rem.pop();
            while rem.last().is_some_and(Rat::is_zero) {
                rem.pop();
            }
        }
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Rat::from_int(k as i64))
                .collect(),
        )
    }

    /// Horner evaluation at a field element.
    pub fn eval(&self, at: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    /// Coefficients of `p(c + u)` as a polynomial in `u`.
    pub fn taylor_shift(&self, c: &Rat) -> UPoly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let add = c * &a[j + 1];
                a[j] = &a[j] + &add;
            }
        }
        UPoly::new(a)
    }

    pub fn squarefree_part(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Roots of `self` lying in ℚ(t₁..tₘ), without multiplicity.
    pub fn param_field_roots(&self) -> Vec<Rat> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sf = self.squarefree_part();
        let mut roots = roots_squarefree(&sf);
        roots.sort_by_key(|r| format!("{r:?}"));
        roots.dedup();
        roots
    }

    /// Multiplicity of `c` as a root.
    pub fn multiplicity(&self, c: &Rat) -> usize {
        let lin = UPoly::linear(c);
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() {
            let (q, r) = p.divrem(&lin);
            if !r.is_zero() {
                break;
            }
            p = q;
            m += 1;
        }
        m
    }
}

/// Truncated power series arithmetic over the parameter field.
pub(crate) mod series {
    use crate::rat::Rat;

    pub fn mul(a: &[Rat], b: &[Rat], n: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); n];
        for (i, x) in a.iter().enumerate().take(n) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(n - i) {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        out
    }

    /// Inverse of a series with invertible constant term.
    pub fn inv(a: &[Rat], n: usize) -> Vec<Rat> {
        let a0 = a[0].inv().expect("series with invertible constant term");
        let mut out = vec![Rat::zero(); n];
        if n == 0 {
            return out;
        }
        out[0] = a0.clone();
        for k in 1..n {
            let mut s = Rat::zero();
            for j in 1..=k.min(a.len().saturating_sub(1)) {
                s = &s + &(&a[j] * &out[k - j]);
            }
            out[k] = -(&s * &a0);
        }
        out
    }

    pub fn div(a: &[Rat], b: &[Rat], n: usize) -> Vec<Rat> {
        mul(a, &inv(b, n), n)
    }
}

fn roots_squarefree(p: &UPoly) -> Vec<Rat> {
    let deg = p.degree().unwrap_or(0);
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![-&(&p.coeffs[0] / &p.coeffs[1])];
    }
    // Clear denominators so that every coefficient is a polynomial.
    let mut lcm = Poly::one();
    for c in &p.coeffs {
        if !c.denom().is_one() {
            let g = lcm.gcd(c.denom());
            lcm = &lcm * &c.denom().exact_div(&g).unwrap();
        }
    }
    let lcm = Rat::from_poly(lcm);
    let polys: Vec<Poly> = p
        .coeffs
        .iter()
        .map(|c| {
            let r = c * &lcm;
            debug_assert!(r.is_polynomial());
            r.numer().clone()
        })
        .collect();
    let mut params: Vec<usize> = Vec::new();
    for q in &polys {
        for v in q.vars() {
            if !params.contains(&v) {
                params.push(v);
            }
        }
    }
    match params.iter().max() {
        None => {
            let qs: Vec<BigRational> = polys
                .iter()
                .map(|q| q.constant_value().unwrap())
                .collect();
            rational_roots(&qs)
                .into_iter()
                .map(Rat::constant)
                .collect()
        }
        Some(&s) => lift_roots(p, &polys, s),
    }
}

/// Roots in ℚ(..)(s) by specializing `s`, recursing, Newton lifting in
/// `s − τ` and Padé reconstruction.
fn lift_roots(p: &UPoly, polys: &[Poly], s: usize) -> Vec<Rat> {
    // grid[k][j]: coefficient of x^k s^j.
    let grid: Vec<Vec<Rat>> = polys
        .iter()
        .map(|q| {
            q.to_univariate(s)
                .into_iter()
                .map(Rat::from_poly)
                .collect()
        })
        .collect();
    let sdeg = grid.iter().map(|g| g.len().saturating_sub(1)).max().unwrap_or(0);
    let deg = polys.len() - 1;
    let mut chosen = None;
    for k in 0..200i64 {
        let tau = if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 };
        let tau_r = Rat::from_int(tau);
        let spec = UPoly::new(
            grid.iter()
                .map(|g| UPoly::new(g.clone()).eval(&tau_r))
                .collect(),
        );
        if spec.degree() != Some(deg) {
            continue;
        }
        if spec.gcd(&spec.derivative()).degree() != Some(0) {
            continue;
        }
        chosen = Some((tau_r, spec));
        break;
    }
    let Some((tau, spec)) = chosen else {
        return Vec::new();
    };
    let base_roots = roots_squarefree(&spec.monic());
    if base_roots.is_empty() {
        return Vec::new();
    }
    let n = 2 * sdeg + 2;
    // Coefficients of x^k as series in u = s − τ.
    let shifted: Vec<Vec<Rat>> = grid
        .iter()
        .map(|g| {
            let mut c = UPoly::new(g.clone()).taylor_shift(&tau).coeffs;
            c.resize(n, Rat::zero());
            c
        })
        .collect();
    let dshifted: Vec<Vec<Rat>> = (1..=deg)
        .map(|k| {
            shifted[k]
                .iter()
                .map(|c| c * &Rat::from_int(k as i64))
                .collect()
        })
        .collect();
    let eval_series = |coeffs: &[Vec<Rat>], c: &[Rat]| -> Vec<Rat> {
        let mut acc = coeffs.last().cloned().unwrap_or_else(|| vec![Rat::zero(); n]);
        for k in (0..coeffs.len().saturating_sub(1)).rev() {
            acc = series::mul(&acc, c, n);
            for (a, b) in acc.iter_mut().zip(&coeffs[k]) {
                *a = &*a + b;
            }
        }
        acc
    };
    let s_var = Rat::var(Var(s));
    let u_to_s = &s_var - &tau;
    let mut found = Vec::new();
    for r in base_roots {
        let mut c = vec![Rat::zero(); n];
        c[0] = r;
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            let f = eval_series(&shifted, &c);
            let df = eval_series(&dshifted, &c);
            let step = series::div(&f, &df, n);
            for (ci, si) in c.iter_mut().zip(&step) {
                *ci = &*ci - si;
            }
        }
        // One more pass so the tail is fully converged.
        let f = eval_series(&shifted, &c);
        let df = eval_series(&dshifted, &c);
        let step = series::div(&f, &df, n);
        for (ci, si) in c.iter_mut().zip(&step) {
            *ci = &*ci - si;
        }
        if let Some((num, den)) = pade(&c, sdeg) {
            let cand = &num.eval(&u_to_s) / &den.eval(&u_to_s);
            if p.eval(&cand).is_zero() {
                found.push(cand);
            }
        }
    }
    found
}

/// Rational reconstruction `num/den ≡ series (mod u^n)` with both degrees
/// at most `bound`.
fn pade(series: &[Rat], bound: usize) -> Option<(UPoly, UPoly)> {
    let n = series.len();
    let mut r0 = UPoly::monomial(Rat::one(), n);
    let mut r1 = UPoly::new(series.to_vec());
    let mut t0 = UPoly::zero();
    let mut t1 = UPoly::one();
    while r1.degree().is_some_and(|d| d > bound) {
        let (q, r) = r0.divrem(&r1);
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if t1.degree().unwrap_or(0) > bound || t1.coeff(0).is_zero() {
        return None;
    }
    Some((r1, t1))
}

/// Rational roots of a squarefree polynomial over ℚ, via Sturm sequences.
pub(crate) fn rational_roots(p: &[BigRational]) -> Vec<BigRational> {
    let mut p: Vec<BigRational> = p.to_vec();
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.len() <= 1 {
        return Vec::new();
    }
    // Integer primitive form.
    let l = p.iter().fold(BigInt::one(), |a, c| a.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let lead = ints.last().unwrap().abs();
    let qp: Vec<BigRational> = ints.iter().cloned().map(BigRational::from_integer).collect();
    let bound = {
        let lc = qp.last().unwrap().abs();
        let m = qp[..qp.len() - 1]
            .iter()
            .map(|c| c.abs() / &lc)
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        m + BigRational::one()
    };
    let sturm = sturm_sequence(&qp);
    let mut roots = Vec::new();
    let lo = -bound.clone();
    let hi = bound;
    let count = variations(&sturm, &lo) - variations(&sturm, &hi);
    isolate(&qp, &sturm, &lead, lo, hi, count, &mut roots);
    roots.sort();
    roots
}

fn isolate(
    p: &[BigRational],
    sturm: &[Vec<BigRational>],
    lead: &BigInt,
    lo: BigRational,
    hi: BigRational,
    count: i64,
    out: &mut Vec<BigRational>,
) {
    if count <= 0 {
        return;
    }
    let lead_q = BigRational::from_integer(lead.clone());
    if (&hi - &lo) * &lead_q < BigRational::one() {
        // At most one candidate k/lead lies in (lo, hi].
        let k_lo = (&lo * &lead_q).floor().to_integer() + BigInt::one();
        let k_hi = (&hi * &lead_q).floor().to_integer();
        let mut k = k_lo;
        while k <= k_hi {
            let cand = BigRational::new(k.clone(), lead.clone());
            if eval_q(p, &cand).is_zero() {
                out.push(cand);
            }
            k += 1;
        }
        return;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let mid = (&lo + &hi) / two;
    let vm = variations(sturm, &mid);
    let left = variations(sturm, &lo) - vm;
    isolate(p, sturm, lead, lo, mid.clone(), left, out);
    isolate(p, sturm, lead, mid, hi, count - left, out);
}

fn eval_q(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn sturm_sequence(p: &[BigRational]) -> Vec<Vec<BigRational>> {
    let deriv: Vec<BigRational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
        .collect();
    let mut seq = vec![p.to_vec(), deriv];
    loop {
        let n = seq.len();
        let r = rem_q(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn rem_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    while r.len() > db {
        let k = r.len() - 1;
        let q = &r[k] / lb;
        for (i, c) in b.iter().enumerate() {
            let idx = k - db + i;
            r[idx] = &r[idx] - &q * c;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

fn variations(seq: &[Vec<BigRational>], x: &BigRational) -> i64 {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for p in seq {
        let v = eval_q(p, x);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if let Some(l) = last {
            if l != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }
    fn t() -> Rat {
        Rat::var(Var::param(0))
    }

    #[test]
    fn rational_roots_over_q() {
        // (3x - 2)(x + 5)(x^2 - 2)
        let p = vec![q(20, 1), q(-26, 1), q(-16, 1), q(13, 1), q(3, 1)];
        let r = rational_roots(&p);
        assert_eq!(r, vec![q(-5, 1), q(2, 3)]);
        assert!(rational_roots(&[q(1, 1), q(0, 1), q(1, 1)]).is_empty());
    }

    #[test]
    fn roots_with_parameter() {
        // (x - t)(x + 1/t)(x^2 + t) over ℚ(t)
        let a = UPoly::linear(&t());
        let b = UPoly::linear(&-(&Rat::one() / &t()));
        let c = UPoly::new(vec![t(), Rat::zero(), Rat::one()]);
        let p = a.mul(&b).mul(&c);
        let mut roots = p.param_field_roots();
        roots.sort_by_key(|r| r.is_polynomial());
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&t()));
        assert!(roots.contains(&-(&Rat::one() / &t())));
    }

    #[test]
    fn roots_two_parameters() {
        let t1 = Rat::var(Var::param(0));
        let t2 = Rat::var(Var::param(1));
        let r1 = &t1 + &t2;
        let r2 = &t1 / &(&t2 + &Rat::one());
        let p = UPoly::linear(&r1).mul(&UPoly::linear(&r2)).mul(&UPoly::linear(&Rat::from_int(3)));
        let roots = p.param_field_roots();
        assert_eq!(roots.len(), 3);
        for r in [r1, r2, Rat::from_int(3)] {
            assert!(roots.contains(&r), "missing {r:?}");
        }
    }

    #[test]
    fn multiplicity_and_shift() {
        let p = UPoly::linear(&t()).pow(3).mul(&UPoly::linear(&Rat::one()));
        assert_eq!(p.multiplicity(&t()), 3);
        assert_eq!(p.multiplicity(&Rat::one()), 1);
        assert_eq!(p.multiplicity(&Rat::from_int(2)), 0);
        let shifted = p.taylor_shift(&t());
        assert!(shifted.coeff(0).is_zero() && shifted.coeff(2).is_zero());
        assert!(!shifted.coeff(3).is_zero());
    }
}
