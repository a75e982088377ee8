//! Exact linear solves over the rational function field.
//!
//! With at most one variable in the entries the system is solved by
//! evaluation at integer points and interpolation, which avoids the
//! expression swell of elimination over `ℚ(t)`. Degree bounds make every
//! answer exact: a nonzero minor of degree `≤ D` cannot vanish at `D + 1`
//! points, and every returned solution is checked against all rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::rat::{Rat, Var};

pub(crate) fn solve(a: &Matrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let mut vars: Vec<Var> = (0..a.rows())
        .flat_map(|i| a.row(i))
        .chain(b)
        .flat_map(Rat::vars)
        .collect();
    vars.sort();
    vars.dedup();
    match vars.as_slice() {
        [] => Univariate::new(a, b, None).solve(),
        [v] => Univariate::new(a, b, Some(*v)).solve(),
        _ => solve_multivariate(a, b),
    }
}

/// `[a | b]` with every row scaled to integer polynomials in one variable.
struct Univariate {
    var: Option<Var>,
    /// Dense coefficient vectors, lowest degree first.
    rows: Vec<Vec<Vec<BigInt>>>,
    degrees: Vec<usize>,
    cols: usize,
}

struct Elimination {
    rank_a: usize,
    rank_ab: usize,
    /// Original indices of the pivot rows, in pivot order.
    pivot_rows: Vec<usize>,
    pivot_cols: Vec<usize>,
}

impl Univariate {
    fn new(a: &Matrix, b: &[Rat], var: Option<Var>) -> Self {
        let v = var.map_or(0, |v| v.0);
        let mut rows = Vec::with_capacity(a.rows());
        let mut degrees = Vec::with_capacity(a.rows());
        for i in 0..a.rows() {
            let entries: Vec<&Rat> = a.row(i).iter().chain(std::iter::once(&b[i])).collect();
            let den = entries.iter().fold(Poly::one(), |acc, r| {
                let g = acc.gcd(r.denom());
                &acc * &r.denom().exact_div(&g).expect("gcd divides")
            });
            let polys: Vec<Vec<BigRational>> = entries
                .iter()
                .map(|r| {
                    let p = (r.numer() * &den).exact_div(r.denom()).expect("denominator divides");
                    p.to_univariate(v)
                        .iter()
                        .map(|c| c.constant_value().expect("single variable"))
                        .collect()
                })
                .collect();
            let scale = polys
                .iter()
                .flatten()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let row: Vec<Vec<BigInt>> = polys
                .iter()
                .map(|p| p.iter().map(|c| (c * &scale).to_integer()).collect())
                .collect();
            degrees.push(row.iter().map(|p| p.len().saturating_sub(1)).max().unwrap_or(0));
            rows.push(row);
        }
        Univariate { var, rows, degrees, cols: a.cols() }
    }

    fn degree(&self, i: usize, j: usize) -> usize {
        self.rows[i][j].len().saturating_sub(1)
    }

    /// Bound on the degree of any minor of `[a | b]` inside the given rows.
    fn minor_degree_bound(&self, rows: impl Iterator<Item = usize>) -> usize {
        let mut d: Vec<usize> = rows.map(|i| self.degrees[i]).collect();
        d.sort_unstable_by(|x, y| y.cmp(x));
        d.iter().take(self.cols + 1).sum()
    }

    /// Bound on the degree of any minor of `a`, by rows or by columns.
    fn coefficient_minor_bound(&self) -> usize {
        let top = |mut d: Vec<usize>| -> usize {
            d.sort_unstable_by(|x, y| y.cmp(x));
            d.iter().take(self.cols).sum()
        };
        let m = self.rows.len();
        let by_rows = top((0..m).map(|i| (0..self.cols).map(|j| self.degree(i, j)).max().unwrap_or(0)).collect());
        let by_cols = top((0..self.cols).map(|j| (0..m).map(|i| self.degree(i, j)).max().unwrap_or(0)).collect());
        by_rows.min(by_cols)
    }

    fn eval(&self, i: usize, j: usize, k: i64) -> BigInt {
        let k = BigInt::from(k);
        self.rows[i][j]
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &k + c)
    }

    fn at(&self, k: i64) -> Vec<Vec<BigInt>> {
        (0..self.rows.len())
            .map(|i| (0..=self.cols).map(|j| self.eval(i, j, k)).collect())
            .collect()
    }

    fn solve(&self) -> Option<Vec<Rat>> {
        let first = eliminate(self.at(0), self.cols);
        if first.rank_a == first.rank_ab {
            // Ranks at one point are lower bounds; the check below makes
            // the answer exact when the point was generic.
            if let Some(sol) = self.solve_square(&first) {
                if self.satisfies(&sol) {
                    return Some(self.to_rats(sol));
                }
            }
        }
        // Over bound + 1 points the largest rank of `a` is the generic one.
        let bound = self.coefficient_minor_bound();
        let mut scan = vec![first];
        for k in 1..=bound as i64 {
            if scan.iter().any(|e| e.rank_a == self.cols) {
                break;
            }
            scan.push(eliminate(self.at(k), self.cols));
        }
        let rank_a = scan.iter().map(|e| e.rank_a).max().unwrap_or(0);
        if scan.iter().any(|e| e.rank_ab > rank_a) {
            return None;
        }
        // The generic pivot rows span the rows of `a`; when the system is
        // consistent they span `[a | b]` too, so a failed check means none.
        let generic = scan.iter().find(|e| e.rank_a == rank_a).expect("maximum is attained");
        let sol = self.solve_square(generic).expect("generic pivot block is invertible");
        self.satisfies(&sol).then(|| self.to_rats(sol))
    }

    /// `Σⱼ a_ij·N_j = b_i·det` for every row, in `Z[t]`.
    fn satisfies(&self, sol: &Solution) -> bool {
        self.rows.iter().all(|row| {
            let mut acc = mul_dense(&row[self.cols], &sol.det);
            negate(&mut acc);
            for (&c, n) in sol.cols.iter().zip(&sol.numers) {
                add_into(&mut acc, &mul_dense(&row[c], n));
            }
            acc.iter().all(Zero::is_zero)
        })
    }

    fn to_rats(&self, sol: Solution) -> Vec<Rat> {
        let v = self.var.map_or(0, |v| v.0);
        let to_poly = |p: &Dense| {
            let coeffs: Vec<Poly> = p.iter().map(|c| Poly::constant(BigRational::from_integer(c.clone()))).collect();
            Poly::from_univariate(v, &coeffs)
        };
        let det = to_poly(&sol.det);
        let mut x = vec![Rat::zero(); self.cols];
        for (&c, n) in sol.cols.iter().zip(&sol.numers) {
            x[c] = Rat::new(to_poly(n), det.clone()).expect("nonzero determinant");
        }
        x
    }

    /// Solves the pivot block by Cramer's rule: the determinant and the
    /// numerators are polynomials of bounded degree, interpolated from their
    /// values at integer points.
    fn solve_square(&self, e: &Elimination) -> Option<Solution> {
        let r = e.rank_a;
        if r == 0 {
            return Some(Solution { cols: Vec::new(), numers: Vec::new(), det: vec![BigInt::one()] });
        }
        let bound = self.minor_degree_bound(e.pivot_rows.iter().copied());
        let mut points = Vec::with_capacity(bound + 1);
        let mut values: Vec<Vec<BigInt>> = vec![Vec::with_capacity(bound + 1); r + 1];
        // At most `bound` points are roots of the determinant.
        for k in 0..=(2 * bound + 1) as i64 {
            if points.len() == bound + 1 {
                break;
            }
            let m: Vec<Vec<BigInt>> = e
                .pivot_rows
                .iter()
                .map(|&i| {
                    e.pivot_cols
                        .iter()
                        .map(|&j| self.eval(i, j, k))
                        .chain(std::iter::once(self.eval(i, self.cols, k)))
                        .collect()
                })
                .collect();
            let Some((det, numers)) = cramer(m) else {
                continue;
            };
            points.push(k);
            values[0].push(det);
            for (slot, n) in values[1..].iter_mut().zip(numers) {
                slot.push(n);
            }
        }
        if points.len() < bound + 1 {
            return None;
        }
        let polys: Vec<Vec<BigRational>> = values.iter().map(|ys| interpolate(&points, ys)).collect();
        // One common denominator keeps every ratio and makes all integral.
        let den = polys.iter().flatten().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints = polys.into_iter().map(|p| {
            let mut d: Dense = p.iter().map(|c| (c * &den).to_integer()).collect();
            while d.last().is_some_and(Zero::is_zero) {
                d.pop();
            }
            d
        });
        let det = ints.next().expect("determinant");
        Some(Solution { cols: e.pivot_cols.clone(), numers: ints.collect(), det })
    }
}

type Dense = Vec<BigInt>;

/// `x_c = numers[k] / det` for `c = cols[k]`; every other unknown is zero.
struct Solution {
    cols: Vec<usize>,
    numers: Vec<Dense>,
    det: Dense,
}

fn mul_dense(a: &[BigInt], b: &[BigInt]) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_into(acc: &mut Dense, p: &[BigInt]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigInt::zero());
    }
    for (x, y) in acc.iter_mut().zip(p) {
        *x += y;
    }
}

fn negate(p: &mut Dense) {
    for c in p.iter_mut() {
        *c = -&*c;
    }
}

/// Fraction-free forward elimination over the integers. Only the first `cols`
/// columns are pivot candidates; the last column is the right-hand side.
fn eliminate(mut m: Vec<Vec<BigInt>>, cols: usize) -> Elimination {
    let mut order: Vec<usize> = (0..m.len()).collect();
    let mut prev = BigInt::one();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len())
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].bits())
        else {
            continue;
        };
        m.swap(r, p);
        order.swap(r, p);
        forward_step(&mut m, r, c, &mut prev);
        pivot_cols.push(c);
        r += 1;
    }
    let inconsistent = (r..m.len()).any(|i| !m[i][cols].is_zero());
    Elimination {
        rank_a: r,
        rank_ab: r + usize::from(inconsistent),
        pivot_rows: order[..r].to_vec(),
        pivot_cols,
    }
}

fn forward_step(m: &mut [Vec<BigInt>], r: usize, c: usize, prev: &mut BigInt) {
    let piv = m[r][c].clone();
    let (head, after) = m.split_at_mut(r + 1);
    let row = &head[r];
    for other in after.iter_mut() {
        let f = other[c].clone();
        for (x, y) in other.iter_mut().zip(row.iter()).skip(c) {
            let v = &piv * &*x - &f * y;
            *x = if prev.is_one() { v } else { v / &*prev };
        }
    }
    *prev = piv;
}

fn step(m: &mut [Vec<BigInt>], r: usize, c: usize, prev: &mut BigInt) {
    let piv = m[r][c].clone();
    let (before, rest) = m.split_at_mut(r);
    let (row, after) = rest.split_first_mut().expect("pivot row");
    for other in before.iter_mut().chain(after.iter_mut()) {
        let f = other[c].clone();
        for (x, y) in other.iter_mut().zip(row.iter()) {
            let v = &piv * &*x - &f * y;
            *x = if prev.is_one() { v } else { v / &*prev };
        }
    }
    *prev = piv;
}

/// Determinant and `det · x` for a square system `[m | rhs]`, or `None`
/// when it is singular.
fn cramer(mut m: Vec<Vec<BigInt>>) -> Option<(BigInt, Vec<BigInt>)> {
    let n = m.len();
    let mut prev = BigInt::one();
    let mut negate = false;
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        if p != c {
            m.swap(c, p);
            negate = !negate;
        }
        step(&mut m, c, c, &mut prev);
    }
    // Gauss-Jordan leaves `prev` on the whole diagonal.
    let sign = |v: BigInt| if negate { -v } else { v };
    let numers = m.into_iter().map(|row| sign(row[n].clone())).collect();
    Some((sign(prev), numers))
}

/// Newton interpolation through `(points[i], ys[i])`; coefficients lowest
/// degree first.
fn interpolate(points: &[i64], ys: &[BigInt]) -> Vec<BigRational> {
    let n = points.len();
    let mut dd: Vec<BigRational> = ys.iter().cloned().map(BigRational::from_integer).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let h = BigRational::from_integer(BigInt::from(points[i] - points[i - level]));
            dd[i] = (&dd[i] - &dd[i - 1]) / h;
        }
    }
    // Horner on the Newton form: coeffs := coeffs · (t − points[i]) + dd[i]
    let mut coeffs: Vec<BigRational> = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let shift = BigRational::from_integer(BigInt::from(points[i]));
        let mut next = vec![BigRational::zero(); n];
        for d in (0..n).rev() {
            if d + 1 < n {
                next[d + 1] += &coeffs[d];
            }
            next[d] -= &coeffs[d] * &shift;
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    coeffs
}

/// Fallback for several variables: rows picked at a rational point, then
/// fraction-free Gauss-Jordan over the polynomial ring.
fn solve_multivariate(a: &Matrix, b: &[Rat]) -> Option<Vec<Rat>> {
    if let Some(rows) = select_rows(a, b) {
        if rows.len() < a.rows() {
            let sub = Matrix::from_rows(rows.iter().map(|&i| a.row(i).to_vec()).collect());
            let sub_b: Vec<Rat> = rows.iter().map(|&i| b[i].clone()).collect();
            // Inconsistency of a subsystem is a certificate.
            let x = fraction_free(&sub, &sub_b)?;
            if a.mul_vec(&x) == b {
                return Some(x);
            }
        }
    }
    fraction_free(a, b)
}

fn fraction_free(a: &Matrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.cols();
    let mut m: Vec<Vec<Poly>> = (0..a.rows())
        .map(|i| {
            let entries = a.row(i).iter().chain(std::iter::once(&b[i]));
            let den = entries.clone().fold(Poly::one(), |acc, r| {
                let g = acc.gcd(r.denom());
                &acc * &r.denom().exact_div(&g).expect("gcd divides")
            });
            entries
                .map(|r| (r.numer() * &den).exact_div(r.denom()).expect("denominator divides"))
                .collect()
        })
        .collect();
    let mut prev = Poly::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..=n {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len())
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].num_terms())
        else {
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for i in 0..m.len() {
            if i == r {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..=n {
                let v = &(&piv * &m[i][j]) - &(&f * &m[r][j]);
                m[i][j] = v.exact_div(&prev).expect("fraction-free step is exact");
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = Rat::new(m[row][n].clone(), m[row][p].clone()).expect("nonzero pivot");
    }
    Some(x)
}

/// Rows of `[a | b]` independent after specializing every variable to a
/// fixed rational point; `None` when an entry has a pole there.
fn select_rows(a: &Matrix, b: &[Rat]) -> Option<Vec<usize>> {
    let point = |v: Var| {
        BigRational::new(BigInt::from(1009 + 97 * v.0 as i64), BigInt::from(13 + 4 * v.0 as i64))
    };
    let specialize = |r: &Rat| -> Option<BigRational> {
        let mut r = r.clone();
        for v in r.vars() {
            r = r.substitute(v, &point(v)).ok()?;
        }
        r.constant_value()
    };
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut chosen = Vec::new();
    for i in 0..a.rows() {
        let mut row = Vec::with_capacity(a.cols() + 1);
        for j in 0..a.cols() {
            row.push(specialize(&a[(i, j)])?);
        }
        row.push(specialize(&b[i])?);
        for (p, e) in &basis {
            if !row[*p].is_zero() {
                let f = row[*p].clone();
                for (x, y) in row.iter_mut().zip(e) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = row.iter().position(|x| !x.is_zero()) {
            let inv = row[p].recip();
            row.iter_mut().for_each(|x| *x *= &inv);
            basis.push((p, row));
            chosen.push(i);
        }
    }
    Some(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expr;
    use crate::rat::Vars;

    fn m(rows: &[&[&str]], vars: &Vars) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|e| parse_expr(e, vars).unwrap()).collect())
                .collect(),
        )
    }

    #[test]
    fn interpolation_recovers_polynomials() {
        let ys: Vec<BigInt> = (0..4).map(|k: i64| BigInt::from(2 * k * k * k - k + 7)).collect();
        let p = interpolate(&[0, 1, 2, 3], &ys);
        let want: Vec<BigRational> = [7, -1, 0, 2].iter().map(|&c| BigRational::from_integer(c.into())).collect();
        assert_eq!(p, want);
    }

    #[test]
    fn cramer_signs() {
        let m = vec![
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(3)],
            vec![BigInt::from(2), BigInt::from(0), BigInt::from(4)],
        ];
        let (det, n) = cramer(m).unwrap();
        assert_eq!(det, BigInt::from(-2));
        // x = (2, 3)
        assert_eq!(n, vec![BigInt::from(-4), BigInt::from(-6)]);
    }

    #[test]
    fn paths_agree() {
        let v1 = Vars::with_params(&["t"]);
        let v2 = Vars::with_params(&["t", "s"]);
        // Singular at t = 0 and t = 1, so the first point is not generic.
        let cases: [(&[&[&str]], &[&str]); 4] = [
            (&[&["t", "1"], &["t^2", "t"]], &["1", "t"]),
            (&[&["t*(t-1)", "1"], &["0", "t"]], &["1", "2"]),
            (&[&["t", "1"], &["t^2", "t"]], &["1", "1"]),
            (&[&["1/(t-3)", "t"], &["1", "t^2 - 3*t"], &["2", "1"]], &["0", "0", "1"]),
        ];
        for (rows, rhs) in cases {
            let a = m(rows, &v1);
            let b: Vec<Rat> = rhs.iter().map(|e| parse_expr(e, &v1).unwrap()).collect();
            let x = solve(&a, &b);
            let y = fraction_free(&a, &b);
            assert_eq!(x.is_some(), y.is_some(), "{rows:?}");
            if let Some(x) = x {
                assert_eq!(a.mul_vec(&x), b);
            }
            // A second variable forces the fallback.
            let s1 = parse_expr("s + 1", &v2).unwrap();
            let a2 = m(rows, &v2).map(|e| e * &s1);
            let b2: Vec<Rat> = rhs.iter().map(|e| &parse_expr(e, &v2).unwrap() * &s1).collect();
            assert_eq!(solve(&a2, &b2).is_some(), y.is_some());
        }
    }

    #[test]
    fn constant_systems() {
        let v = Vars::with_params(&["t"]);
        let a = m(&[&["1", "2"], &["2", "4"]], &v);
        assert!(solve(&a, &[Rat::one(), Rat::one()]).is_none());
        let x = solve(&a, &[Rat::one(), Rat::from_int(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![Rat::one(), Rat::from_int(2)]);
        assert!(solve(&Matrix::zeros(2, 2), &[Rat::zero(), Rat::one()]).is_none());
    }
}
