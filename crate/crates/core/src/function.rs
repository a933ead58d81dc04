use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poset::{ElementId, FinitePoset};
use crate::rational::Rational;

/// A rational-valued function on the carrier of a poset. Values may be
/// absent; reading an absent value is a [`Error::MissingValue`].
#[derive(Debug, Clone)]
pub struct PosetFunction {
    poset: Arc<FinitePoset>,
    values: Vec<Option<Rational>>,
}

impl PosetFunction {
    pub fn from_fn<F>(poset: &Arc<FinitePoset>, mut f: F) -> Self
    where
        F: FnMut(&ElementId) -> Rational,
    {
        let values = poset.ids().iter().map(|id| Some(f(id))).collect();
        PosetFunction {
            poset: Arc::clone(poset),
            values,
        }
    }

    /// Like [`from_fn`](Self::from_fn) but the closure may leave points undefined.
    pub fn from_partial_fn<F>(poset: &Arc<FinitePoset>, f: F) -> Self
    where
        F: FnMut(&ElementId) -> Option<Rational>,
    {
        let values = poset.ids().iter().map(f).collect();
        PosetFunction {
            poset: Arc::clone(poset),
            values,
        }
    }

    /// Values given per label; labels not listed stay undefined.
    pub fn from_pairs<I>(poset: &Arc<FinitePoset>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ElementId, Rational)>,
    {
        let mut values = vec![None; poset.len()];
        for (id, value) in pairs {
            let i = poset.index_of(&id)?;
            if values[i].is_some() {
                return Err(Error::DuplicateElement(id.to_string()));
            }
            values[i] = Some(value);
        }
        Ok(PosetFunction {
            poset: Arc::clone(poset),
            values,
        })
    }

    pub fn constant(poset: &Arc<FinitePoset>, c: Rational) -> Self {
        Self::from_fn(poset, |_| c.clone())
    }

    /// `f(k) = k + t` on integer labels; non-integer labels stay undefined.
    pub fn integer_affine(poset: &Arc<FinitePoset>, t: &Rational) -> Self {
        Self::from_partial_fn(poset, |id| {
            id.as_str()
                .parse::<BigInt>()
                .ok()
                .map(|k| Rational::from_integer(k) + t)
        })
    }

    /// `f(k) = k` on integer labels.
    pub fn integer_identity(poset: &Arc<FinitePoset>) -> Self {
        Self::integer_affine(poset, &Rational::zero())
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    /// Value at carrier index `idx`.
    pub fn at(&self, idx: usize) -> Result<&Rational> {
        self.values[idx]
            .as_ref()
            .ok_or_else(|| Error::MissingValue(self.poset.id(idx).to_string()))
    }

    pub fn value(&self, id: &ElementId) -> Result<&Rational> {
        self.at(self.poset.index_of(id)?)
    }

    pub fn is_defined(&self, idx: usize) -> bool {
        self.values[idx].is_some()
    }

    /// `1/f` on the points where `f` is defined.
    ///
    /// Fails with [`Error::ZeroValue`] at the first point listed in `required`
    /// where `f` vanishes (or [`Error::MissingValue`] if undefined there).
    /// Zeros outside `required` become undefined points of the result.
    pub fn reciprocal(&self, required: &[usize]) -> Result<PosetFunction> {
        for &i in required {
            if self.at(i)?.is_zero() {
                return Err(Error::ZeroValue(self.poset.id(i).to_string()));
            }
        }
        let values = self
            .values
            .iter()
            .map(|v| match v {
                Some(v) if !v.is_zero() => Some(Rational::one() / v),
                _ => None,
            })
            .collect();
        Ok(PosetFunction {
            poset: Arc::clone(&self.poset),
            values,
        })
    }

    /// Returns a copy with the value at `idx` replaced.
    pub fn with_value(&self, idx: usize, value: Rational) -> PosetFunction {
        let mut values = self.values.clone();
        values[idx] = Some(value);
        PosetFunction {
            poset: Arc::clone(&self.poset),
            values,
        }
    }

    /// One `<element> <rational>` line per defined point, carrier order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.values.iter().enumerate() {
            if let Some(v) = v {
                out.push_str(&format!("{} {}\n", self.poset.id(i), v));
            }
        }
        out
    }
}

/// Reads `<element> <rational>` lines; blank lines and `#` comments are ignored.
pub fn parse_function(poset: &Arc<FinitePoset>, text: &str) -> Result<PosetFunction> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [id, value] = tokens.as_slice() else {
            return Err(Error::Parse {
                line: lineno + 1,
                message: "expected `<element> <rational>`".into(),
            });
        };
        let value = crate::rational::parse_rational(value).map_err(|e| Error::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        pairs.push((ElementId::from(*id), value));
    }
    PosetFunction::from_pairs(poset, pairs)
}
