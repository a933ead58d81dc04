//! Turning command-line strings into posets, subsets and functions.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use latmat_core::divisor::lcm_u64;
use latmat_core::{
    build_poset, parse_function, parse_poset, parse_rational, DivisorPoset, ElementId, FinitePoset,
    OrderedSubset, PosetFunction, Rational,
};

use crate::{CliError, MatrixArgs};

/// Comma-separated, whitespace-trimmed, nonempty items.
pub fn split_list(text: &str) -> Result<Vec<String>, CliError> {
    let items: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    if items.iter().any(String::is_empty) {
        return Err(CliError::Usage(format!("malformed list `{text}`")));
    }
    Ok(items)
}

pub fn int_list(text: &str) -> Result<Vec<i64>, CliError> {
    split_list(text)?
        .iter()
        .map(|s| {
            s.parse::<i64>()
                .map_err(|_| CliError::Usage(format!("`{s}` is not an integer")))
        })
        .collect()
}

pub fn positive_list(text: &str) -> Result<Vec<u64>, CliError> {
    split_list(text)?
        .iter()
        .map(|s| match s.parse::<u64>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!("`{s}` is not a positive integer"))),
        })
        .collect()
}

/// The integer chain on the given values, ascending.
pub fn integer_chain(values: &[i64]) -> Result<Arc<FinitePoset>, CliError> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let ids: Vec<ElementId> = sorted.iter().map(|&v| ElementId::from(v)).collect();
    let rels: Vec<(ElementId, ElementId)> = ids
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect();
    Ok(Arc::new(build_poset(ids, rels)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HostKind {
    File,
    Chain,
    Divisors,
}

/// The host poset together with the sets selected on it.
#[derive(Debug, Clone)]
pub struct Selection {
    pub poset: Arc<FinitePoset>,
    pub kind: HostKind,
    pub x: OrderedSubset,
    pub y: OrderedSubset,
    pub basis: Option<OrderedSubset>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn select(args: &MatrixArgs) -> Result<Selection, CliError> {
    let set = args.set.as_deref().map(split_list).transpose()?;
    let set_y = args.set_y.as_deref().map(split_list).transpose()?;
    let basis = args.basis.as_deref().map(split_list).transpose()?;
    let extra: Vec<&String> = set.iter().chain(&set_y).chain(&basis).flatten().collect();

    let sources = [
        args.poset.is_some(),
        args.chain.is_some(),
        args.divisors.is_some(),
    ];
    if sources.iter().filter(|&&b| b).count() != 1 {
        return Err(CliError::Usage(
            "give exactly one of --poset, --chain, --divisors".into(),
        ));
    }

    let (poset, kind, default) = if let Some(path) = &args.poset {
        let poset = Arc::new(parse_poset(&read(path)?)?);
        let all: Vec<String> = poset.ids().iter().map(ToString::to_string).collect();
        (poset, HostKind::File, all)
    } else if let Some(list) = &args.chain {
        let chain = int_list(list)?;
        let mut carrier = chain.clone();
        for s in &extra {
            carrier.push(
                s.parse()
                    .map_err(|_| CliError::Usage(format!("`{s}` is not an integer")))?,
            );
        }
        let default = chain.iter().map(ToString::to_string).collect();
        (integer_chain(&carrier)?, HostKind::Chain, default)
    } else {
        let list = positive_list(args.divisors.as_deref().unwrap_or_default())?;
        let mut all = list.clone();
        for s in &extra {
            all.extend(positive_list(s)?);
        }
        let host = DivisorPoset::hosting(&all)?;
        let default = list.iter().map(ToString::to_string).collect();
        (Arc::clone(host.poset()), HostKind::Divisors, default)
    };

    let x = OrderedSubset::sorted(&poset, set.unwrap_or(default))?;
    let y = match set_y {
        Some(ids) => OrderedSubset::sorted(&poset, ids)?,
        None => x.clone(),
    };
    let basis = basis
        .map(|ids| OrderedSubset::sorted(&poset, ids))
        .transpose()?;
    Ok(Selection {
        poset,
        kind,
        x,
        y,
        basis,
    })
}

/// The built-in function families, or a file of values.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSource {
    Identity,
    Constant(Rational),
    Linear(Rational),
    File(PathBuf),
}

fn linear_parameter(text: &str) -> Result<Rational, CliError> {
    let value = text
        .strip_prefix("t=")
        .ok_or_else(|| CliError::Usage(format!("expected `t=<rational>`, got `{text}`")))?;
    Ok(parse_rational(value)?)
}

impl FunctionSource {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        if text == "identity" {
            Ok(FunctionSource::Identity)
        } else if let Some(c) = text.strip_prefix("constant:") {
            Ok(FunctionSource::Constant(parse_rational(c)?))
        } else if let Some(rest) = text.strip_prefix("linear:") {
            Ok(FunctionSource::Linear(linear_parameter(rest)?))
        } else {
            Ok(FunctionSource::File(PathBuf::from(text)))
        }
    }

    pub fn from_args(args: &MatrixArgs) -> Result<Self, CliError> {
        match (&args.f, &args.f_linear, &args.t) {
            (Some(_), Some(_), _) => {
                Err(CliError::Usage("--f and --f-linear are exclusive".into()))
            }
            (Some(f), None, _) => Self::parse(f),
            (None, Some(lin), _) => Ok(FunctionSource::Linear(linear_parameter(lin)?)),
            (None, None, Some(t)) => Ok(FunctionSource::Linear(parse_rational(t)?)),
            (None, None, None) => Ok(FunctionSource::Identity),
        }
    }

    pub fn build(&self, poset: &Arc<FinitePoset>) -> Result<PosetFunction, CliError> {
        Ok(match self {
            FunctionSource::Identity => PosetFunction::integer_identity(poset),
            FunctionSource::Constant(c) => PosetFunction::constant(poset, c.clone()),
            FunctionSource::Linear(t) => PosetFunction::integer_affine(poset, t),
            FunctionSource::File(path) => parse_function(poset, &read(path)?)?,
        })
    }
}

/// Divisor labels of a selection built with `--divisors`.
pub fn divisor_values(s: &OrderedSubset) -> Vec<u64> {
    s.ids()
        .iter()
        .map(|id| {
            id.as_str()
                .parse()
                .expect("divisor hosts carry integer labels")
        })
        .collect()
}

/// `lcm` of the divisor labels of a selection.
pub fn lcm_of(s: &OrderedSubset) -> Result<u64, CliError> {
    Ok(lcm_u64(&divisor_values(s))?)
}
