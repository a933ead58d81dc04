//! MIN and MAX matrices on integer chains with `f(k) = k + t`.
//!
//! Odd examples take any strictly increasing chain, even ones a chain of
//! consecutive integers. Examples 1, 2, 5 and 6 are determinants, the others
//! inverses; 1 to 4 are MAX (join) matrices and 5 to 8 MIN (meet) matrices.

use std::fmt::Write as _;

use latmat_core::{
    build_matrix, det_closed_form, inverse_closed_form, oracle_det, oracle_inverse, parse_rational,
    DetMethod, EngineConfig, Error, InverseMethod, MatrixKind, MatrixSpec, OrderedSubset,
    PosetFunction, RatMatrix, Rational,
};
use num_traits::{One, Signed, Zero};

use crate::commands::{det_method_name, inverse_method_name, write_matrix};
use crate::input::{int_list, integer_chain};
use crate::{CliError, ExampleArgs};

#[derive(Debug, Clone, PartialEq)]
pub enum ExampleFormula {
    Det(Rational),
    Inverse(RatMatrix),
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn tridiagonal(
    n: usize,
    diagonal: impl Fn(usize) -> Rational,
    off: impl Fn(usize, usize) -> Rational,
) -> RatMatrix {
    RatMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diagonal(i)
        } else if i.abs_diff(j) == 1 {
            off(i, j)
        } else {
            Rational::zero()
        }
    })
}

/// Checks the hypotheses of example `id` on the chain `xs`.
pub fn check_hypotheses(id: u8, xs: &[i64], t: &Rational) -> Result<(), Error> {
    if !(1..=8).contains(&id) {
        return Err(Error::Hypothesis(format!("there is no example {id}")));
    }
    if xs.is_empty() {
        return Err(Error::EmptySet);
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Hypothesis(
            "the chain must be strictly increasing".into(),
        ));
    }
    if id.is_multiple_of(2) && xs.windows(2).any(|w| w[1] - w[0] != 1) {
        return Err(Error::Hypothesis(format!(
            "example {id} needs consecutive integers"
        )));
    }
    let vanishes = |x: i64| &r(x) + t == Rational::zero();
    let last = xs[xs.len() - 1];
    if matches!(id, 3 | 4) && vanishes(last) {
        return Err(Error::Hypothesis(format!(
            "t = -{last} makes the matrix singular"
        )));
    }
    if id >= 5 {
        if let Some(&x) = xs.iter().find(|&&x| vanishes(x)) {
            return Err(Error::Hypothesis(format!("f vanishes at {x}")));
        }
    }
    Ok(())
}

/// The closed expression of example `id`, assuming its hypotheses hold.
///
/// Example 6 evaluates to `x_1 + t`: the product
/// `f(x_1)(f(x_2) - f(x_1))...(f(x_n) - f(x_{n-1}))` has unit factors after
/// the first on a consecutive chain. For a single element every inverse is
/// `[1 / (x_1 + t)]`.
pub fn example_formula(id: u8, xs: &[i64], t: &Rational) -> ExampleFormula {
    let n = xs.len();
    let x = |i: usize| r(xs[i]);
    let f = |i: usize| x(i) + t;
    if n == 1 && matches!(id, 3 | 4 | 7 | 8) {
        return ExampleFormula::Inverse(
            RatMatrix::from_rows(vec![vec![f(0).recip()]]).expect("1x1"),
        );
    }
    match id {
        1 => ExampleFormula::Det((0..n - 1).fold(f(n - 1), |acc, i| acc * (x(i) - x(i + 1)))),
        2 => {
            let sign = if n % 2 == 1 {
                Rational::one()
            } else {
                -Rational::one()
            };
            ExampleFormula::Det(sign * f(n - 1))
        }
        3 => ExampleFormula::Inverse(tridiagonal(
            n,
            |i| {
                if i == 0 {
                    (x(0) - x(1)).recip()
                } else if i < n - 1 {
                    (x(i - 1) - x(i)).recip() + (x(i) - x(i + 1)).recip()
                } else {
                    (x(n - 2) - x(n - 1)).recip() + f(n - 1).recip()
                }
            },
            |i, j| (x(i) - x(j)).abs().recip(),
        )),
        4 => ExampleFormula::Inverse(tridiagonal(
            n,
            |i| {
                if i == 0 {
                    r(-1)
                } else if i < n - 1 {
                    r(-2)
                } else {
                    r(-1) + f(n - 1).recip()
                }
            },
            |_, _| r(1),
        )),
        5 => ExampleFormula::Det((1..n).fold(f(0), |acc, i| acc * (x(i) - x(i - 1)))),
        6 => ExampleFormula::Det(f(0)),
        7 => ExampleFormula::Inverse(tridiagonal(
            n,
            |i| {
                if i == 0 {
                    (x(1) - x(0)).recip() * f(1) / f(0)
                } else if i < n - 1 {
                    f(i).recip() * (f(i - 1) / (x(i) - x(i - 1)) + f(i + 1) / (x(i + 1) - x(i)))
                } else {
                    f(n - 1).recip() * (f(n - 2) / (x(n - 1) - x(n - 2)) + r(1))
                }
            },
            |i, j| -(x(i) - x(j)).abs().recip(),
        )),
        8 => ExampleFormula::Inverse(tridiagonal(
            n,
            |i| {
                if i == 0 {
                    (f(0) + r(1)) / f(0)
                } else if i < n - 1 {
                    r(2)
                } else {
                    r(1)
                }
            },
            |_, _| r(-1),
        )),
        _ => unreachable!("checked by check_hypotheses"),
    }
}

fn chain_of(args: &ExampleArgs) -> Result<Vec<i64>, CliError> {
    match (&args.chain, args.start, args.n) {
        (Some(list), None, None) => int_list(list),
        (None, Some(start), Some(n)) if n >= 1 => Ok((0..n as i64).map(|i| start + i).collect()),
        (None, Some(_), Some(_)) => Err(CliError::Usage("--n must be at least 1".into())),
        _ => Err(CliError::Usage(
            "give either --chain or both --start and --n".into(),
        )),
    }
}

const TITLES: [&str; 8] = [
    "det of the MAX matrix [S]_f",
    "det of the MAX matrix [S]_f on consecutive integers",
    "inverse of the MAX matrix [S]_f",
    "inverse of the MAX matrix [S]_f on consecutive integers",
    "det of the MIN matrix (S)_f",
    "det of the MIN matrix (S)_f on consecutive integers",
    "inverse of the MIN matrix (S)_f",
    "inverse of the MIN matrix (S)_f on consecutive integers",
];

pub fn cmd_example(args: &ExampleArgs, out: &mut String) -> Result<(), CliError> {
    let id = args.id;
    if !(1..=8).contains(&id) {
        return Err(CliError::Usage(format!("example must be 1 to 8, got {id}")));
    }
    let xs = chain_of(args)?;
    let t = parse_rational(&args.t)?;
    check_hypotheses(id, &xs, &t)?;

    let poset = integer_chain(&xs)?;
    let f = PosetFunction::integer_affine(&poset, &t);
    let kind = if id <= 4 {
        MatrixKind::Join
    } else {
        MatrixKind::Meet
    };
    let spec = MatrixSpec::square(kind, OrderedSubset::whole(&poset), f)?;
    let m = build_matrix(&spec)?;
    let cfg = EngineConfig::default();
    // Odd examples go through the join-closed forms, even ones through the
    // upper-closed forms.
    let (det_method, inv_method) = if id % 2 == 1 {
        (DetMethod::JoinClosed, InverseMethod::JoinClosed)
    } else {
        (DetMethod::UpperClosed, InverseMethod::UpperClosed)
    };

    let chain: Vec<String> = xs.iter().map(ToString::to_string).collect();
    let _ = writeln!(
        out,
        "example {id}: {}, f(k) = k + t",
        TITLES[usize::from(id) - 1]
    );
    let _ = writeln!(out, "S: {}", chain.join(" "));
    let _ = writeln!(out, "t: {t}");
    write_matrix(out, "matrix", &m);

    let agree = match example_formula(id, &xs, &t) {
        ExampleFormula::Det(formula) => {
            let engine = det_closed_form(&spec, det_method, &cfg)?;
            let oracle = oracle_det(&m)?;
            let _ = writeln!(out, "formula: {formula}");
            let _ = writeln!(
                out,
                "engine ({}): {}",
                det_method_name(engine.method),
                engine.value
            );
            let _ = writeln!(out, "oracle: {oracle}");
            formula == engine.value && engine.value == oracle
        }
        ExampleFormula::Inverse(formula) => {
            let engine = inverse_closed_form(&spec, inv_method, &cfg)?;
            let oracle = oracle_inverse(&m)?;
            write_matrix(out, "formula", &formula);
            write_matrix(
                out,
                &format!("engine ({})", inverse_method_name(engine.method)),
                &engine.matrix,
            );
            write_matrix(out, "oracle", &oracle);
            formula == engine.matrix && engine.matrix == oracle
        }
    };
    let _ = writeln!(out, "verdict: {}", if agree { "AGREE" } else { "DISAGREE" });
    if agree {
        Ok(())
    } else {
        Err(CliError::Disagree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det(id: u8, xs: &[i64], t: i64) -> Rational {
        match example_formula(id, xs, &r(t)) {
            ExampleFormula::Det(v) => v,
            ExampleFormula::Inverse(_) => panic!("example {id} is an inverse"),
        }
    }

    fn inverse(id: u8, xs: &[i64], t: i64) -> RatMatrix {
        match example_formula(id, xs, &r(t)) {
            ExampleFormula::Inverse(m) => m,
            ExampleFormula::Det(_) => panic!("example {id} is a determinant"),
        }
    }

    #[test]
    fn determinant_values() {
        assert_eq!(det(1, &[1, 2, 3], 0), r(3));
        assert_eq!(det(2, &[4, 5, 6], 0), r(6));
        assert_eq!(det(5, &[1, 2, 3], 0), r(1));
        assert_eq!(det(6, &[1, 2, 3], 0), r(1));
        // Two elements: [[1, 1], [1, 2]] has determinant 1, not -1.
        assert_eq!(det(6, &[1, 2], 0), r(1));
    }

    #[test]
    fn inverse_values() {
        assert_eq!(
            inverse(3, &[2, 5, 9], 1).get(0, 1),
            &Rational::new(1.into(), 3.into())
        );
        assert_eq!(
            inverse(8, &[1, 2, 3], 0),
            RatMatrix::from_i64_rows(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 1]])
        );
        assert_eq!(
            inverse(4, &[5], 0),
            RatMatrix::from_rows(vec![vec![Rational::new(1.into(), 5.into())]]).unwrap()
        );
    }

    #[test]
    fn hypotheses() {
        assert!(check_hypotheses(3, &[1, 2, 3], &r(-3)).is_err());
        assert!(check_hypotheses(1, &[1, 2, 3], &r(-3)).is_ok());
        assert!(check_hypotheses(2, &[1, 2, 4], &r(0)).is_err());
        assert!(check_hypotheses(5, &[1, 2, 4], &r(-2)).is_err());
        assert!(check_hypotheses(1, &[3, 2], &r(0)).is_err());
    }
}
