//! Sparse multivariate polynomials over ℚ.
//!
//! Variables are addressed by index. Index 0 is the main variable, the
//! remaining indices are parameters. Terms are kept in a `BTreeMap` keyed by
//! [`Monomial`], whose ordering is graded lexicographic with lower indices
//! ranking higher, so the last entry of the map is the leading term.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize, exp: u32) -> Self {
        let mut m = Monomial(vec![0; index + 1]);
        m.0[index] = exp;
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        let v = (0..len).map(|i| self.exp(i) + other.exp(i)).collect();
        Monomial(v)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut v = Vec::with_capacity(self.0.len());
        for i in 0..self.0.len() {
            let (a, b) = (self.exp(i), other.exp(i));
            if b > a {
                return None;
            }
            v.push(a - b);
        }
        let mut m = Monomial(v);
        m.trim();
        Some(m)
    }

    fn with_exp(&self, index: usize, exp: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= index {
            v.resize(index + 1, 0);
        }
        v[index] = exp;
        let mut m = Monomial(v);
        m.trim();
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let len = self.0.len().max(other.0.len());
                for i in 0..len {
                    match self.exp(i).cmp(&other.exp(i)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().rev()).finish()
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_int(c: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(index: usize) -> Self {
        Poly::monomial(Monomial::var(index, 1), BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    /// Indices of all variables that occur.
    pub fn vars(&self) -> Vec<usize> {
        let mut seen = Vec::new();
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && !seen.contains(&i) {
                    seen.push(i);
                }
            }
        }
        seen.sort_unstable();
        seen
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &BigRational) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, a)| (mm.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn derive(&self, v: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                out.add_term(
                    m.with_exp(v, e - 1),
                    c * BigRational::from_integer(BigInt::from(e)),
                );
            }
        }
        out
    }

    /// Coefficients of `self` viewed as a polynomial in variable `v`;
    /// entry `k` multiplies `v^k`.
    pub fn to_univariate(&self, v: usize) -> Vec<Poly> {
        let deg = match self.degree_in(v) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            out[e].terms.insert(m.with_exp(v, 0), c.clone());
        }
        out
    }

    pub fn from_univariate(v: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let shift = Monomial::var(v, k as u32);
            for (m, a) in &c.terms {
                out.add_term(m.mul(&shift), a.clone());
            }
        }
        out
    }

    /// Substitutes a rational value for variable `v`.
    pub fn substitute(&self, v: usize, value: &BigRational) -> Poly {
        let coeffs = self.to_univariate(v);
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = &acc.scale(value) + c;
        }
        acc
    }

    /// Substitutes a polynomial for variable `v`.
    pub fn compose(&self, v: usize, value: &Poly) -> Poly {
        let coeffs = self.to_univariate(v);
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Evaluates at a complex point; `point[i]` is the value of variable `i`
    /// (missing entries are treated as zero).
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut term = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let z = point.get(i).copied().unwrap_or_default();
                    term *= z.powu(e);
                }
            }
            sum += term;
        }
        sum
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "exact_div by zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            rem = &rem - &d.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Lowest common denominator of the coefficients.
    pub fn coeff_denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Greatest common divisor, normalized to leading coefficient 1.
    /// `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        gcd_rec(self, other).monic()
    }

    /// gcd of the coefficients with respect to variable `v`.
    pub fn content_in(&self, v: usize) -> Poly {
        let coeffs = self.to_univariate(v);
        let mut g = Poly::zero();
        for c in coeffs.iter().rev() {
            if c.is_zero() {
                continue;
            }
            g = gcd_rec(&g, c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        g.monic()
    }
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let va = a.vars();
    let vb = b.vars();
    if let ([x], [y]) = (va.as_slice(), vb.as_slice()) {
        if x == y {
            return modular::gcd(a, b, *x);
        }
    }
    // Prefer a variable both share; otherwise reduce through the content.
    let shared = va.iter().find(|v| vb.contains(v)).copied();
    let v = match shared {
        Some(v) => v,
        None => {
            // No common variable: the gcd lies in the content of each side
            // with respect to a variable the other lacks.
            let v = va[0];
            return gcd_rec(&a.content_in(v), b);
        }
    };
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let c = gcd_rec(&ca, &cb);
    let g = primitive_prs_gcd(v, pa.to_univariate(v), pb.to_univariate(v));
    (&c * &Poly::from_univariate(v, &g)).monic()
}

/// Primitive polynomial remainder sequence on primitive inputs, as
/// coefficient vectors in `v`.
fn primitive_prs_gcd(v: usize, a: Vec<Poly>, b: Vec<Poly>) -> Vec<Poly> {
    let (mut a, mut b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    loop {
        if b.len() <= 1 {
            // b is a nonzero v-free primitive polynomial, hence a unit.
            return if b.is_empty() { a } else { vec![Poly::one()] };
        }
        let r = pseudo_rem(&a, &b);
        let r = primitive_part_uni(v, r);
        a = b;
        b = r;
    }
}

fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r: Vec<Poly> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(bc * &lr);
        }
        debug_assert!(r[dr].is_zero());
        while r.last().is_some_and(Poly::is_zero) {
            r.pop();
        }
    }
    r
}

/// Univariate gcd over Z by images modulo word-sized primes, Chinese
/// remaindering and trial division.
mod modular {
    use super::*;

    type Dense = Vec<BigInt>;

    /// Primitive integer multiple of a univariate polynomial in `v`.
    fn to_dense(p: &Poly, v: usize) -> Dense {
        let coeffs: Vec<BigRational> = p
            .to_univariate(v)
            .iter()
            .map(|c| c.constant_value().expect("univariate"))
            .collect();
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Dense = coeffs.iter().map(|c| (c * &den).to_integer()).collect();
        primitive(ints)
    }

    fn primitive(p: Dense) -> Dense {
        let g = p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() || g.is_one() {
            return p;
        }
        p.into_iter().map(|c| c / &g).collect()
    }

    fn is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    fn primes() -> impl Iterator<Item = u64> {
        static CACHE: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
        let cached = CACHE.get_or_init(|| (1u64 << 20..1 << 31).rev().filter(|&n| is_prime(n)).take(256).collect());
        let below = *cached.last().expect("primes exist");
        cached
            .iter()
            .copied()
            .chain((1u64 << 20..below).rev().filter(|&n| is_prime(n)))
    }

    fn modp(c: &BigInt, p: u64) -> u64 {
        c.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
    }

    fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    /// Monic gcd over `F_p`.
    fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
        while !b.is_empty() {
            let inv = pow_mod(*b.last().expect("nonzero"), p - 2, p);
            while a.len() >= b.len() {
                let f = a.last().expect("nonzero") * inv % p;
                let shift = a.len() - b.len();
                for (i, &c) in b.iter().enumerate() {
                    a[i + shift] = (a[i + shift] + p - f * c % p) % p;
                }
                a = trim(a);
                if a.is_empty() {
                    break;
                }
            }
            std::mem::swap(&mut a, &mut b);
        }
        let inv = pow_mod(*a.last().expect("nonzero gcd"), p - 2, p);
        a.iter().map(|c| c * inv % p).collect()
    }

    /// Whether `d` divides `n` over Q.
    fn divides(d: &Dense, n: &Dense) -> bool {
        let lc = BigRational::from_integer(d.last().expect("nonzero").clone());
        let mut r: Vec<BigRational> = n.iter().cloned().map(BigRational::from_integer).collect();
        while r.len() >= d.len() {
            let f = r.last().expect("nonempty") / &lc;
            let shift = r.len() - d.len();
            for (i, c) in d.iter().enumerate() {
                r[i + shift] -= &f * BigRational::from_integer(c.clone());
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        r.is_empty()
    }

    pub(super) fn gcd(a: &Poly, b: &Poly, v: usize) -> Poly {
        let (a, b) = (to_dense(a, v), to_dense(b, v));
        let lc = a.last().expect("nonzero").gcd(b.last().expect("nonzero"));
        let mut modulus = BigInt::one();
        let mut acc: Dense = Vec::new();
        let mut degree = usize::MAX;
        let mut last: Option<Dense> = None;
        for p in primes() {
            if modp(&lc, p) == 0 {
                continue;
            }
            let am: Vec<u64> = trim(a.iter().map(|c| modp(c, p)).collect());
            let bm: Vec<u64> = trim(b.iter().map(|c| modp(c, p)).collect());
            let g = gcd_mod(am, bm, p);
            let d = g.len() - 1;
            if d == 0 {
                return Poly::one();
            }
            if d > degree {
                continue; // unlucky prime
            }
            if d < degree {
                degree = d;
                modulus = BigInt::one();
                acc = vec![BigInt::zero(); d + 1];
                last = None;
            }
            // Scale the image so its leading coefficient is the image of `lc`.
            let s = modp(&lc, p);
            let g: Vec<u64> = g.iter().map(|c| c * s % p).collect();
            let bp = BigInt::from(p);
            let inv = BigInt::from(pow_mod(modp(&modulus, p), p - 2, p));
            for (x, &r) in acc.iter_mut().zip(&g) {
                // x ≡ x (mod M), x ≡ r (mod p)
                let delta = ((BigInt::from(r) - &*x) * &inv).mod_floor(&bp);
                *x += &modulus * delta;
            }
            modulus *= &bp;
            let half = &modulus >> 1;
            let lifted: Dense = acc
                .iter()
                .map(|c| if *c > half { c - &modulus } else { c.clone() })
                .collect();
            let candidate = primitive(lifted);
            if last.as_ref() == Some(&candidate) && divides(&candidate, &a) && divides(&candidate, &b) {
                let coeffs: Vec<Poly> = candidate
                    .into_iter()
                    .map(|c| Poly::constant(BigRational::from_integer(c)))
                    .collect();
                return Poly::from_univariate(v, &coeffs).monic();
            }
            last = Some(candidate);
        }
        unreachable!("prime supply exhausted")
    }
}

fn primitive_part_uni(_v: usize, coeffs: Vec<Poly>) -> Vec<Poly> {
    if coeffs.is_empty() {
        return coeffs;
    }
    let mut g = Poly::zero();
    for c in coeffs.iter().rev() {
        if !c.is_zero() {
            g = gcd_rec(&g, c);
            if g.is_constant() {
                break;
            }
        }
    }
    // Normalize the leading coefficient sign/scale for smaller numbers.
    let lead = coeffs.last().unwrap().leading_coeff();
    let g = if g.is_constant() {
        Poly::constant(lead)
    } else {
        g.scale(&lead)
    };
    coeffs
        .into_iter()
        .map(|c| c.exact_div(&g).expect("content divides"))
        .collect()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Formats a polynomial with the given variable names.
pub(crate) fn format_poly(p: &Poly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        for (vi, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = names
                .get(vi)
                .cloned()
                .unwrap_or_else(|| format!("v{vi}"));
            factors.push(if e == 1 { name } else { format!("{name}^{e}") });
        }
        let coeff = if abs.is_integer() {
            abs.numer().to_string()
        } else {
            format!("{}/{}", abs.numer(), abs.denom())
        };
        if factors.is_empty() {
            out.push_str(&coeff);
        } else {
            if !abs.is_one() {
                out.push_str(&coeff);
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn x() -> Poly {
        Poly::var(0)
    }
    fn t() -> Poly {
        Poly::var(1)
    }

    #[test]
    fn grlex_leading_term() {
        let p = &(&x() * &t()) + &t().pow(2);
        // x*t and t^2 have equal degree; x ranks higher.
        let (m, _) = p.leading_term().unwrap();
        assert_eq!(m.exp(0), 1);
        let p2 = &x() + &t().pow(2);
        assert_eq!(p2.leading_term().unwrap().0.exp(1), 2);
    }

    #[test]
    fn exact_division() {
        let a = &x() - &t();
        let b = &x() + &t();
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!((&prod + &Poly::one()).exact_div(&a), None);
    }

    #[test]
    fn gcd_bivariate() {
        let a = &x() - &t();
        let b = &(&x() * &t()) + &Poly::one();
        let c = &x() + &Poly::from_int(2);
        let g = (&a * &b).gcd(&(&a * &c));
        assert_eq!(g, a.monic());
        let g = (&(&a * &b) * &b).gcd(&(&b * &c));
        assert_eq!(g, b.monic());
        assert_eq!(a.gcd(&c), Poly::one());
    }

    #[test]
    fn gcd_with_contents() {
        let a = &t() * &(&x() - &Poly::one());
        let b = &t().pow(2) * &x();
        assert_eq!(a.gcd(&b), t());
        let c = t().scale(&q(3));
        let d = &t() * &Poly::var(2);
        assert_eq!(c.gcd(&d), t());
    }

    #[test]
    fn derive_and_substitute() {
        let p = &(&x().pow(3) * &t()) + &x();
        let dp = p.derive(0);
        assert_eq!(dp, &(&x().pow(2) * &t()).scale(&q(3)) + &Poly::one());
        let s = p.substitute(1, &q(2));
        assert_eq!(s, &x().pow(3).scale(&q(2)) + &x());
    }
}
