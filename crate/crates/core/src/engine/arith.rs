//! GCD and LCM specializations on `(Z+, |)` through the Dirichlet form of Ψ.
//!
//! Sets are plain slices of positive integers and are processed in ascending
//! order, which is a linear extension of divisibility. Returned matrices are
//! indexed in that order.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::divisor::{
    dirichlet_psi, divisors, is_lcm_closed, is_multiple_closed, lcm_u64, nt_mobius,
    ArithmeticalFunction,
};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::Rational;

fn ascending(s: &[u64]) -> Result<Vec<u64>> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if s.contains(&0) {
        return Err(Error::Hypothesis("0 is not a positive integer".into()));
    }
    let mut v = s.to_vec();
    v.sort_unstable();
    if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateElement(w[0].to_string()));
    }
    Ok(v)
}

fn multiple_closed(s: &[u64]) -> Result<Vec<u64>> {
    let v = ascending(s)?;
    if !is_multiple_closed(&v)? {
        return Err(Error::Hypothesis(
            "S is not multiple-closed up to lcm S".into(),
        ));
    }
    Ok(v)
}

fn lcm_closed(s: &[u64]) -> Result<Vec<u64>> {
    let v = ascending(s)?;
    if !is_lcm_closed(&v)? {
        return Err(Error::Hypothesis("S is not LCM-closed".into()));
    }
    Ok(v)
}

/// `[ζ ∗ (f_{x_v} μ)](lcm S / x_v)` for every member.
fn multiple_closed_psi(s: &[u64], f: &ArithmeticalFunction) -> Result<Vec<Rational>> {
    let l = lcm_u64(s)?;
    s.iter().map(|&x| dirichlet_psi(f, x, l / x)).collect()
}

/// `Σ [ζ ∗ (f_z μ)](lcm S / z)` over `x_v | z | lcm S` with `x_t ∤ z` for
/// every later `x_t`.
fn lcm_closed_psi(s: &[u64], f: &ArithmeticalFunction) -> Result<Vec<Rational>> {
    let l = lcm_u64(s)?;
    let divs = divisors(l);
    (0..s.len())
        .map(|v| {
            let mut acc = Rational::zero();
            for &z in &divs {
                if z % s[v] != 0 || s[v + 1..].iter().any(|&xt| z % xt == 0) {
                    continue;
                }
                acc += dirichlet_psi(f, z, l / z)?;
            }
            Ok(acc)
        })
        .collect()
}

/// Nonzero on every divisor of `lcm S` and `f(x)f(y) = f(gcd) f(lcm)` on
/// every pair of `S`; returns `1/f`.
fn gcd_reciprocal(s: &[u64], f: &ArithmeticalFunction) -> Result<ArithmeticalFunction> {
    let l = lcm_u64(s)?;
    let mut restricted = ArithmeticalFunction::default();
    for d in divisors(l) {
        restricted.insert(d, f.get(d)?.clone());
    }
    let inverse = restricted.reciprocal()?;
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i + 1..] {
            let lhs = f.get(a)? * f.get(b)?;
            let rhs = f.get(a.gcd(&b))? * f.get(a.lcm(&b))?;
            if lhs != rhs {
                return Err(Error::Semimultiplicativity(a.to_string(), b.to_string()));
            }
        }
    }
    Ok(inverse)
}

fn product(values: &[Rational]) -> Rational {
    values.iter().fold(Rational::one(), |acc, v| acc * v)
}

fn square_prefactor(s: &[u64], f: &ArithmeticalFunction) -> Result<Rational> {
    let mut out = Rational::one();
    for &x in s {
        let v = f.get(x)?;
        out *= v * v;
    }
    Ok(out)
}

/// `det [S]_f` for `S` multiple-closed up to `lcm S`.
pub fn lcm_det_multiple_closed(s: &[u64], f: &ArithmeticalFunction) -> Result<Rational> {
    let s = multiple_closed(s)?;
    Ok(product(&multiple_closed_psi(&s, f)?))
}

/// `det [S]_f` for LCM-closed `S`.
pub fn lcm_det_lcm_closed(s: &[u64], f: &ArithmeticalFunction) -> Result<Rational> {
    let s = lcm_closed(s)?;
    Ok(product(&lcm_closed_psi(&s, f)?))
}

/// `det (S)_f` for `S` multiple-closed up to `lcm S` and semimultiplicative
/// `f` without zeros.
pub fn gcd_det_multiple_closed(s: &[u64], f: &ArithmeticalFunction) -> Result<Rational> {
    let s = multiple_closed(s)?;
    let g = gcd_reciprocal(&s, f)?;
    Ok(square_prefactor(&s, f)? * product(&multiple_closed_psi(&s, &g)?))
}

/// `det (S)_f` for LCM-closed `S` and semimultiplicative `f` without zeros.
pub fn gcd_det_lcm_closed(s: &[u64], f: &ArithmeticalFunction) -> Result<Rational> {
    let s = lcm_closed(s)?;
    let g = gcd_reciprocal(&s, f)?;
    Ok(square_prefactor(&s, f)? * product(&lcm_closed_psi(&s, &g)?))
}

/// `b_ij = Σ_{x_k | gcd(x_i, x_j)} μ(x_i/x_k) μ(x_j/x_k) / psi_k`.
fn divisor_quotient(s: &[u64], psi: &[Rational]) -> Result<RatMatrix> {
    if let Some(k) = psi.iter().position(Zero::is_zero) {
        return Err(Error::ZeroPsi(s[k].to_string()));
    }
    let n = s.len();
    Ok(RatMatrix::from_fn(n, n, |i, j| {
        let mut acc = Rational::zero();
        for k in 0..n {
            let xk = s[k];
            if !s[i].is_multiple_of(xk) || !s[j].is_multiple_of(xk) {
                continue;
            }
            let mu = i64::from(nt_mobius(s[i] / xk)) * i64::from(nt_mobius(s[j] / xk));
            if mu != 0 {
                acc += Rational::from_integer(mu.into()) / &psi[k];
            }
        }
        acc
    }))
}

/// `[S]_f^{-1}` for `S` multiple-closed up to `lcm S`.
pub fn lcm_inverse_multiple_closed(s: &[u64], f: &ArithmeticalFunction) -> Result<RatMatrix> {
    let s = multiple_closed(s)?;
    divisor_quotient(&s, &multiple_closed_psi(&s, f)?)
}

/// `(S)_f^{-1}` for `S` multiple-closed up to `lcm S` and semimultiplicative
/// `f` without zeros.
pub fn gcd_inverse_multiple_closed(s: &[u64], f: &ArithmeticalFunction) -> Result<RatMatrix> {
    let s = multiple_closed(s)?;
    let g = gcd_reciprocal(&s, f)?;
    let b = divisor_quotient(&s, &multiple_closed_psi(&s, &g)?)?;
    let n = s.len();
    let mut out = b;
    for i in 0..n {
        for j in 0..n {
            let scale = f.get(s[i])? * f.get(s[j])?;
            let v = out.get(i, j) / scale;
            out.set(i, j, v);
        }
    }
    Ok(out)
}
