//! Divisor lattices and the arithmetic needed for the Dirichlet forms.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::function::PosetFunction;
use crate::poset::{ElementId, FinitePoset, OrderedSubset};
use crate::rational::Rational;

fn require_positive(s: &[u64]) -> Result<()> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if s.contains(&0) {
        return Err(Error::Hypothesis("0 is not a positive integer".into()));
    }
    Ok(())
}

pub fn lcm_of_set(s: &[u64]) -> Result<BigUint> {
    require_positive(s)?;
    Ok(s.iter()
        .fold(BigUint::one(), |acc, &x| acc.lcm(&BigUint::from(x))))
}

pub fn gcd_of_set(s: &[u64]) -> Result<BigUint> {
    require_positive(s)?;
    Ok(s.iter()
        .fold(BigUint::zero(), |acc, &x| acc.gcd(&BigUint::from(x))))
}

/// `lcm S` narrowed to `u64`, for operations that enumerate its divisors.
pub fn lcm_u64(s: &[u64]) -> Result<u64> {
    let l = lcm_of_set(s)?;
    l.to_u64().ok_or_else(|| Error::Overflow(l.to_string()))
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Number-theoretic Möbius function.
pub fn nt_mobius(n: u64) -> i8 {
    assert!(n >= 1, "mobius is defined on positive integers");
    let factors = factorize(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// `M_S`: every divisor of `lcm S` that is a multiple of some member, ascending.
pub fn multiple_closure(s: &[u64]) -> Result<Vec<u64>> {
    let l = lcm_u64(s)?;
    Ok(divisors(l)
        .into_iter()
        .filter(|y| s.iter().any(|x| y % x == 0))
        .collect())
}

fn as_sorted_set(s: &[u64]) -> Vec<u64> {
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// `S = M_S`.
pub fn is_multiple_closed(s: &[u64]) -> Result<bool> {
    Ok(multiple_closure(s)? == as_sorted_set(s))
}

/// `lcm(x, y)` lies in `S` for every pair.
pub fn is_lcm_closed(s: &[u64]) -> Result<bool> {
    require_positive(s)?;
    for &x in s {
        for &y in s {
            let l = BigUint::from(x).lcm(&BigUint::from(y));
            if !s.iter().any(|&z| BigUint::from(z) == l) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A finite set of positive integers ordered by divisibility.
#[derive(Debug, Clone)]
pub struct DivisorPoset {
    poset: Arc<FinitePoset>,
    values: Vec<u64>,
}

impl DivisorPoset {
    /// The carrier is `carrier` sorted ascending, which is a linear extension
    /// of divisibility.
    pub fn new(carrier: &[u64]) -> Result<Self> {
        require_positive(carrier)?;
        let values = as_sorted_set(carrier);
        if values.len() != carrier.len() {
            let dup = carrier
                .iter()
                .find(|x| carrier.iter().filter(|y| y == x).count() > 1)
                .expect("a duplicate exists");
            return Err(Error::DuplicateElement(dup.to_string()));
        }
        let ids = values.iter().map(|&v| ElementId::from(v)).collect();
        let poset = FinitePoset::from_order_fn(ids, |i, j| values[j].is_multiple_of(values[i]))?;
        debug_assert!(poset
            .ids()
            .iter()
            .zip(&values)
            .all(|(id, v)| id.as_str() == v.to_string()));
        Ok(DivisorPoset {
            poset: Arc::new(poset),
            values,
        })
    }

    /// All divisors of `n`.
    pub fn divisors_of(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Hypothesis("0 is not a positive integer".into()));
        }
        Self::new(&divisors(n))
    }

    /// All divisors of `lcm S`; contains every gcd and lcm of members of `S`.
    pub fn hosting(s: &[u64]) -> Result<Self> {
        Self::divisors_of(lcm_u64(s)?)
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> u64 {
        self.values[idx]
    }

    pub fn index_of(&self, n: u64) -> Result<usize> {
        self.values
            .binary_search(&n)
            .map_err(|_| Error::UnknownElement(n.to_string()))
    }

    /// The members of `s` as an ordered subset, ascending.
    pub fn subset(&self, s: &[u64]) -> Result<OrderedSubset> {
        OrderedSubset::sorted(&self.poset, s.iter().map(|&x| ElementId::from(x)))
    }

    /// Tabulates an arithmetical function on the carrier.
    pub fn function<F>(&self, mut f: F) -> PosetFunction
    where
        F: FnMut(u64) -> Rational,
    {
        let mut values = self.values.iter();
        PosetFunction::from_fn(&self.poset, |_| {
            f(*values.next().expect("one value per element"))
        })
    }
}

/// An arithmetical function tabulated on a finite set of positive integers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArithmeticalFunction {
    values: BTreeMap<u64, Rational>,
}

impl ArithmeticalFunction {
    pub fn from_fn<I, F>(domain: I, mut f: F) -> Self
    where
        I: IntoIterator<Item = u64>,
        F: FnMut(u64) -> Rational,
    {
        ArithmeticalFunction {
            values: domain.into_iter().map(|n| (n, f(n))).collect(),
        }
    }

    /// `N(n) = n` on `domain`.
    pub fn identity<I: IntoIterator<Item = u64>>(domain: I) -> Self {
        Self::from_fn(domain, |n| Rational::from_integer(n.into()))
    }

    /// `ζ(n) = 1` on `domain`.
    pub fn zeta<I: IntoIterator<Item = u64>>(domain: I) -> Self {
        Self::from_fn(domain, |_| Rational::one())
    }

    /// Reads integer-labelled values off a poset function.
    pub fn from_poset_function(f: &PosetFunction, points: &[(usize, u64)]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for &(idx, n) in points {
            values.insert(n, f.at(idx)?.clone());
        }
        Ok(ArithmeticalFunction { values })
    }

    pub fn get(&self, n: u64) -> Result<&Rational> {
        self.values
            .get(&n)
            .ok_or_else(|| Error::MissingValue(n.to_string()))
    }

    pub fn insert(&mut self, n: u64, value: Rational) {
        self.values.insert(n, value);
    }

    /// `1/f`; fails on the first zero value.
    pub fn reciprocal(&self) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (&n, v) in &self.values {
            if v.is_zero() {
                return Err(Error::ZeroValue(n.to_string()));
            }
            values.insert(n, Rational::one() / v);
        }
        Ok(ArithmeticalFunction { values })
    }
}

/// `[ζ ∗ (f_a μ)](n) = Σ_{d | n} f(a d) μ(d)`.
pub fn dirichlet_psi(f: &ArithmeticalFunction, a: u64, n: u64) -> Result<Rational> {
    if a == 0 || n == 0 {
        return Err(Error::Hypothesis("0 is not a positive integer".into()));
    }
    let mut acc = Rational::zero();
    for d in divisors(n) {
        let mu = nt_mobius(d);
        if mu == 0 {
            continue;
        }
        let ad = a
            .checked_mul(d)
            .ok_or_else(|| Error::Overflow(format!("{a}*{d}")))?;
        let v = f.get(ad)?;
        if mu > 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    Ok(acc)
}
