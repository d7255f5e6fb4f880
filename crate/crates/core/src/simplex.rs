//! Exact maximization of the quadratic objective `Ψ_α` over the truncated
//! simplex `{y ≥ 0, y0 + y1 + y2 + y3 ≤ α}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("alpha = {0} is outside [0, 1/6]")]
    AlphaOutOfRange(Rational),
    #[error("point {0:?} is not in the simplex for alpha = {1}")]
    Infeasible(Vec<String>, Rational),
    #[error("grid needs at least one step")]
    ZeroSteps,
}

/// Twice the symmetric matrix of the quadratic part, so all entries are integers.
const TWICE_Q: [[i64; 4]; 4] = [
    [36, 30, 24, 24],
    [30, 24, 24, 24],
    [24, 24, 24, 21],
    [24, 24, 21, 18],
];
/// Coefficients of `y1 + 2 y2 + 3 y3`, which is multiplied by `1 - 6α`.
const LINEAR: [i64; 4] = [0, 1, 2, 3];

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn int(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// A point of `R^4` tagged with the `α` of the simplex it should live in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexPoint {
    pub y: [Rational; 4],
    pub alpha: Rational,
}

impl SimplexPoint {
    pub fn new(y: [Rational; 4], alpha: Rational) -> Self {
        SimplexPoint { y, alpha }
    }

    pub fn origin(alpha: Rational) -> Self {
        SimplexPoint::new(std::array::from_fn(|_| Rational::zero()), alpha)
    }

    /// `α` times the `i`-th unit vector.
    pub fn corner(alpha: Rational, i: usize) -> Self {
        let mut p = SimplexPoint::origin(alpha.clone());
        p.y[i] = alpha;
        p
    }

    pub fn is_feasible(&self) -> bool {
        let sum: Rational = self.y.iter().sum();
        self.y.iter().all(|v| !v.is_negative()) && sum <= self.alpha
    }

    fn check(&self) -> Result<(), SimplexError> {
        if self.is_feasible() {
            Ok(())
        } else {
            Err(SimplexError::Infeasible(
                self.y.iter().map(|v| v.to_string()).collect(),
                self.alpha.clone(),
            ))
        }
    }
}

fn check_alpha(alpha: &Rational) -> Result<(), SimplexError> {
    if alpha.is_negative() || *alpha > rat(1, 6) {
        return Err(SimplexError::AlphaOutOfRange(alpha.clone()));
    }
    Ok(())
}

/// The quadratic part `yᵀQy`.
pub fn quadratic_part(y: &[Rational; 4]) -> Rational {
    let mut twice = Rational::zero();
    for i in 0..4 {
        for j in 0..4 {
            twice += &y[i] * &y[j] * int(TWICE_Q[i][j]);
        }
    }
    twice / int(2)
}

fn linear_part(y: &[Rational; 4], alpha: &Rational) -> Rational {
    let weighted: Rational = (0..4).map(|i| &y[i] * int(LINEAR[i])).sum();
    weighted * (Rational::one() - alpha * int(6))
}

fn psi_unchecked(alpha: &Rational, y: &[Rational; 4]) -> Rational {
    quadratic_part(y) + linear_part(y, alpha)
}

/// `Ψ_α(y)` for a point of the simplex.
pub fn psi(alpha: &Rational, y: &SimplexPoint) -> Result<Rational, SimplexError> {
    let p = SimplexPoint::new(y.y.clone(), alpha.clone());
    p.check()?;
    Ok(psi_unchecked(alpha, &p.y))
}

/// Solves `a x = b` exactly. Returns one solution (free variables set to
/// zero) or `None` if the system is inconsistent.
pub fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for k in c..cols {
            a[r][k] = &a[r][k] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in c..cols {
                    let t = &f * &a[r][k];
                    a[i][k] -= t;
                }
                let t = &f * &b[r];
                b[i] -= t;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if b[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

/// Stationary point of `Ψ_α` restricted to the face where the coordinates
/// outside `support` vanish and, if `on_top`, the coordinates sum to `α`.
fn face_stationary_point(alpha: &Rational, support: &[usize], on_top: bool) -> Option<[Rational; 4]> {
    let k = support.len();
    let unknowns = k + usize::from(on_top);
    let slope = Rational::one() - alpha * int(6);
    let mut a = Vec::new();
    let mut b = Vec::new();
    // ∂Ψ/∂y_i = Σ_j 2Q_ij y_j + c_i  (= λ on the top face)
    for &i in support {
        let mut row: Vec<Rational> = support.iter().map(|&j| int(TWICE_Q[i][j])).collect();
        if on_top {
            row.push(int(-1));
        }
        a.push(row);
        b.push(-(int(LINEAR[i]) * &slope));
    }
    if on_top {
        let mut row = vec![Rational::one(); k];
        row.push(Rational::zero());
        a.push(row);
        b.push(alpha.clone());
    }
    if unknowns == 0 {
        return Some(std::array::from_fn(|_| Rational::zero()));
    }
    let x = solve_linear(a, b)?;
    let mut y: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
    for (idx, &i) in support.iter().enumerate() {
        y[i] = x[idx].clone();
    }
    Some(y)
}

/// Every candidate maximizer: the stationary point of each face and the
/// five corners of the simplex, restricted to feasible points.
pub fn candidate_points(alpha: &Rational) -> Vec<SimplexPoint> {
    let mut out = vec![SimplexPoint::origin(alpha.clone())];
    out.extend((0..4).map(|i| SimplexPoint::corner(alpha.clone(), i)));
    for zeros in 0u32..16 {
        let support: Vec<usize> = (0..4).filter(|i| zeros >> i & 1 == 0).collect();
        for on_top in [false, true] {
            if let Some(y) = face_stationary_point(alpha, &support, on_top) {
                let p = SimplexPoint::new(y, alpha.clone());
                if p.is_feasible() {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Exact maximum of `Ψ_α` over the simplex and a point attaining it.
pub fn psi_star(alpha: &Rational) -> Result<(Rational, SimplexPoint), SimplexError> {
    check_alpha(alpha)?;
    let mut best: Option<(Rational, SimplexPoint)> = None;
    for p in candidate_points(alpha) {
        let v = psi_unchecked(alpha, &p.y);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, p));
        }
    }
    Ok(best.expect("the origin is always a candidate"))
}

/// Maximum of `Ψ_α` over the lattice points `y = k·α/steps` with
/// `k0 + k1 + k2 + k3 ≤ steps`. A lower bound on [`psi_star`].
pub fn psi_star_grid(alpha: &Rational, steps: u32) -> Result<Rational, SimplexError> {
    if steps == 0 {
        return Err(SimplexError::ZeroSteps);
    }
    if let Some(v) = grid_fast(alpha, steps) {
        return Ok(v);
    }
    let s = steps as i64;
    let mut best: Option<Rational> = None;
    for_each_lattice_point(steps, |k| {
        let y = k.map(|ki| alpha * rat(ki, s));
        let v = psi_unchecked(alpha, &y);
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    });
    Ok(best.expect("the origin is a lattice point"))
}

fn for_each_lattice_point(steps: u32, mut f: impl FnMut([i64; 4])) {
    let s = steps as i64;
    for k0 in 0..=s {
        for k1 in 0..=s - k0 {
            for k2 in 0..=s - k0 - k1 {
                for k3 in 0..=s - k0 - k1 - k2 {
                    f([k0, k1, k2, k3]);
                }
            }
        }
    }
}

/// Integer evaluation for `α = p/q`:
/// `Ψ = [p²·kᵀ(2Q)k + 2·s·p·(q − 6p)·(k1 + 2k2 + 3k3)] / (2q²s²)`.
fn grid_fast(alpha: &Rational, steps: u32) -> Option<Rational> {
    let p = alpha.numer().to_i128()?;
    let q = alpha.denom().to_i128()?;
    if p.abs() > 1 << 30 || q > 1 << 30 || steps > 1 << 12 {
        return None;
    }
    let s = steps as i128;
    let mut best: Option<i128> = None;
    for_each_lattice_point(steps, |k| {
        let mut quad = 0i128;
        for i in 0..4 {
            for j in 0..4 {
                quad += (TWICE_Q[i][j] * k[i] * k[j]) as i128;
            }
        }
        let lin: i128 = (0..4).map(|i| (LINEAR[i] * k[i]) as i128).sum();
        let num = p * p * quad + 2 * s * p * (q - 6 * p) * lin;
        if best.is_none_or(|b| num > b) {
            best = Some(num);
        }
    });
    let den = 2 * q * q * s * s;
    Some(Rational::new(BigInt::from(best?), BigInt::from(den)))
}

/// Upper bound on the normalized edge count among the tiling copies: the
/// quadratic part plus `(3y1 + 3y2 + 6y3)/n`.
pub fn aggregate_edge_bound(y: &[Rational; 4], n: u64) -> Rational {
    let n = Rational::from_integer(n.into());
    quadratic_part(y) + (&y[1] * int(3) + &y[2] * int(3) + &y[3] * int(6)) / n
}

/// Compares the aggregate bound plus the linear term against
/// `Ψ_α(y) + 6/n·(y1 + y2 + 2y3)`. Returns both sides and whether `lhs ≤ rhs`.
pub fn aggregate_against_psi(
    y: &[Rational; 4],
    n: u64,
    alpha: &Rational,
) -> (Rational, Rational, bool) {
    let lhs = aggregate_edge_bound(y, n) + linear_part(y, alpha);
    let slack = (&y[1] + &y[2] + &y[3] * int(2)) * rat(6, n as i64);
    let rhs = psi_unchecked(alpha, y) + slack;
    let holds = lhs <= rhs;
    (lhs, rhs, holds)
}

/// Exact decimal expansion when the denominator has only factors 2 and 5 and
/// the expansion has at most `max_digits` significant digits; otherwise
/// `max_digits` significant digits, rounded half away from zero.
pub fn to_decimal(x: &Rational, max_digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let neg = x.is_negative();
    let x = x.abs();
    if let Some(s) = exact_decimal(&x, max_digits) {
        return if neg { format!("-{s}") } else { s };
    }
    // Find e with 10^(e-1) <= x < 10^e.
    let ten = BigInt::from(10);
    let mut e: i64 = 0;
    let mut scaled = x.clone();
    while scaled >= Rational::one() {
        scaled /= Rational::from_integer(ten.clone());
        e += 1;
    }
    while scaled < Rational::new(1.into(), 10.into()) {
        scaled *= Rational::from_integer(ten.clone());
        e -= 1;
    }
    // scaled in [0.1, 1): digits = round(scaled * 10^max_digits)
    let mut digits = (scaled * Rational::from_integer(ten.pow(max_digits as u32)))
        .round()
        .to_integer();
    if digits == ten.pow(max_digits as u32) {
        digits /= &ten;
        e += 1;
    }
    let mut ds = digits.to_string();
    while ds.len() < max_digits {
        ds.insert(0, '0');
    }
    let body = place_point(&ds, e);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Inserts a decimal point so that `digits` (as `0.digits`) is scaled by `10^e`,
/// then trims trailing zeros.
fn place_point(digits: &str, e: i64) -> String {
    let s = if e <= 0 {
        format!("0.{}{}", "0".repeat((-e) as usize), digits)
    } else if e as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(e as usize - digits.len()))
    } else {
        format!("{}.{}", &digits[..e as usize], &digits[e as usize..])
    };
    trim_fraction(s)
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

fn exact_decimal(x: &Rational, max_digits: usize) -> Option<String> {
    let mut d = x.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut k = 0u32;
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    k = k.max(twos).max(fives);
    let scaled = (x * Rational::from_integer(BigInt::from(10).pow(k))).to_integer();
    let mut digits = scaled.to_string();
    let k = k as usize;
    if digits.len() <= k {
        digits = format!("{}{}", "0".repeat(k + 1 - digits.len()), digits);
    }
    let split = digits.len() - k;
    let s = trim_fraction(if k == 0 {
        digits.clone()
    } else {
        format!("{}.{}", &digits[..split], &digits[split..])
    });
    let significant = s
        .chars()
        .filter(|c| c.is_ascii_digit())
        .collect::<String>()
        .trim_start_matches('0')
        .trim_end_matches('0')
        .len();
    (significant <= max_digits).then_some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: [i64; 4], q: i64, alpha: Rational) -> SimplexPoint {
        SimplexPoint::new(v.map(|x| rat(x, q)), alpha)
    }

    #[test]
    fn psi_examples() {
        assert!(psi(&rat(1, 9), &SimplexPoint::origin(rat(1, 9))).unwrap().is_zero());
        assert_eq!(psi(&rat(1, 9), &p([1, 0, 0, 0], 9, rat(1, 9))).unwrap(), rat(2, 9));
        assert_eq!(psi(&rat(1, 12), &p([0, 0, 0, 1], 12, rat(1, 12))).unwrap(), rat(3, 16));
        assert!(matches!(
            psi(&rat(1, 12), &p([0, 0, 1, 1], 12, rat(1, 12))),
            Err(SimplexError::Infeasible(..))
        ));
    }

    #[test]
    fn psi_star_examples() {
        let (v, y) = psi_star(&Rational::zero()).unwrap();
        assert!(v.is_zero());
        assert_eq!(y, SimplexPoint::origin(Rational::zero()));
        assert_eq!(psi_star(&rat(1, 9)).unwrap().0, rat(2, 9));
        let (v, y) = psi_star(&rat(1, 10)).unwrap();
        assert_eq!(v, rat(21, 100));
        assert_eq!(psi_unchecked(&rat(1, 10), &y.y), v);
        assert!(psi_star(&rat(1, 5)).is_err());
        assert!(psi_star(&rat(-1, 5)).is_err());
    }

    #[test]
    fn grid_examples() {
        let a = rat(1, 10);
        let g = psi_star_grid(&a, 20).unwrap();
        assert!(g <= rat(21, 100));
        assert!(rat(21, 100) - &g <= rat(5, 1000));
        assert!(psi_star_grid(&Rational::zero(), 3).unwrap().is_zero());
        let corners = (0..4)
            .map(|i| psi_unchecked(&a, &SimplexPoint::corner(a.clone(), i).y))
            .max()
            .unwrap();
        assert_eq!(psi_star_grid(&a, 1).unwrap(), corners.max(Rational::zero()));
    }

    #[test]
    fn grid_fast_matches_rational_path() {
        for (num, den) in [(1, 10), (1, 7), (2, 15), (1, 6)] {
            let a = rat(num, den);
            let mut slow: Option<Rational> = None;
            for_each_lattice_point(6, |k| {
                let y = k.map(|ki| &a * rat(ki, 6));
                let v = psi_unchecked(&a, &y);
                if slow.as_ref().is_none_or(|b| v > *b) {
                    slow = Some(v);
                }
            });
            assert_eq!(grid_fast(&a, 6), slow);
        }
    }

    #[test]
    fn aggregate_examples() {
        let y = [rat(1, 7), int(0), int(0), int(0)];
        assert_eq!(aggregate_edge_bound(&y, 50), rat(18, 49));
        let zero: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
        assert!(aggregate_edge_bound(&zero, 50).is_zero());
        let y = [int(0), rat(1, 10), int(0), int(0)];
        assert_eq!(aggregate_edge_bound(&y, 100), rat(123, 1000));
        assert!(aggregate_against_psi(&y, 100, &rat(1, 10)).2);
    }

    #[test]
    fn linear_solver_cases() {
        // x + y = 2, x - y = 0
        let x = solve_linear(
            vec![vec![int(1), int(1)], vec![int(1), int(-1)]],
            vec![int(2), int(0)],
        )
        .unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
        // inconsistent
        assert!(solve_linear(
            vec![vec![int(1), int(1)], vec![int(2), int(2)]],
            vec![int(1), int(3)],
        )
        .is_none());
        // underdetermined: free variable set to zero
        let x = solve_linear(vec![vec![int(1), int(1)]], vec![int(4)]).unwrap();
        assert_eq!(x, vec![int(4), int(0)]);
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&rat(2, 9), 12), "0.222222222222");
        assert_eq!(to_decimal(&rat(8, 25), 12), "0.32");
        assert_eq!(to_decimal(&rat(1, 2), 12), "0.5");
        assert_eq!(to_decimal(&Rational::zero(), 12), "0");
        assert_eq!(to_decimal(&rat(2, 3), 12), "0.666666666667");
        assert_eq!(to_decimal(&rat(7, 1), 12), "7");
        assert_eq!(to_decimal(&rat(-1, 8), 12), "-0.125");
        assert_eq!(to_decimal(&rat(1, 1024), 3), "0.000977");
        assert_eq!(to_decimal(&rat(200, 3), 4), "66.67");
        assert_eq!(to_decimal(&rat(1, 30), 12), "0.0333333333333");
    }
}
