use std::fmt::Write as _;

use latmat_core::divisor::ArithmeticalFunction;
use latmat_core::engine::arith;
use latmat_core::{
    build_matrix, det_closed_form, factorize_join, factorize_meet, inverse_closed_form, oracle_det,
    oracle_inverse, DetMethod, EngineConfig, Execution, InverseMethod, MatrixKind, MatrixSpec,
    PosetFunction, RatMatrix, Rational,
};

use crate::input::{divisor_values, select, FunctionSource, HostKind, Selection};
use crate::{BuildArgs, CliError, KindArg, MatrixArgs};

pub(crate) fn write_matrix(out: &mut String, header: &str, m: &RatMatrix) {
    let _ = writeln!(out, "{header}:");
    out.push_str(&m.to_string());
}

fn verdict(out: &mut String, agree: bool) -> Result<(), CliError> {
    let _ = writeln!(out, "verdict: {}", if agree { "AGREE" } else { "DISAGREE" });
    if agree {
        Ok(())
    } else {
        Err(CliError::Disagree)
    }
}

fn kind(k: KindArg) -> MatrixKind {
    match k {
        KindArg::Join => MatrixKind::Join,
        KindArg::Meet => MatrixKind::Meet,
    }
}

fn config(args: &MatrixArgs) -> EngineConfig {
    EngineConfig {
        cap: args.cap,
        force: args.force,
        execution: Execution::default(),
    }
}

fn prepare(args: &MatrixArgs) -> Result<(Selection, MatrixSpec), CliError> {
    let sel = select(args)?;
    let f = FunctionSource::from_args(args)?.build(&sel.poset)?;
    let mut spec = MatrixSpec::new(kind(args.kind), sel.x.clone(), sel.y.clone(), f)?;
    if let Some(d) = &sel.basis {
        spec = spec.with_basis(d.clone())?;
    }
    Ok((sel, spec))
}

pub(crate) fn det_method_name(m: DetMethod) -> &'static str {
    match m {
        DetMethod::CauchyBinet => "cauchy-binet",
        DetMethod::JoinClosed => "join-closed",
        DetMethod::UpperClosed => "upper-closed",
        DetMethod::Auto => "auto",
    }
}

pub(crate) fn inverse_method_name(m: InverseMethod) -> &'static str {
    match m {
        InverseMethod::CofactorCauchyBinet => "cofactor-cb",
        InverseMethod::JoinClosed => "join-closed",
        InverseMethod::UpperClosed => "upper-closed",
        InverseMethod::Auto => "auto",
    }
}

fn unknown_method(name: &str, valid: &str) -> CliError {
    CliError::Usage(format!("unknown method `{name}`; expected one of {valid}"))
}

/// `f` tabulated on the integer labels of a divisor host.
fn arithmetical(sel: &Selection, f: &PosetFunction) -> Result<ArithmeticalFunction, CliError> {
    let mut af = ArithmeticalFunction::default();
    for (idx, id) in sel.poset.ids().iter().enumerate() {
        if f.is_defined(idx) {
            let n: u64 = id
                .as_str()
                .parse()
                .expect("divisor hosts carry integer labels");
            af.insert(n, f.at(idx)?.clone());
        }
    }
    Ok(af)
}

/// The set `S` for the divisor-lattice corollaries.
fn dirichlet_set(sel: &Selection, spec: &MatrixSpec) -> Result<Vec<u64>, CliError> {
    if sel.kind != HostKind::Divisors {
        return Err(CliError::Usage(
            "the dirichlet method needs a --divisors host".into(),
        ));
    }
    if !spec.is_single_set() {
        return Err(latmat_core::Error::Hypothesis("the dirichlet forms need X = Y".into()).into());
    }
    Ok(divisor_values(spec.x()))
}

fn dirichlet_det(sel: &Selection, spec: &MatrixSpec) -> Result<(Rational, &'static str), CliError> {
    let s = dirichlet_set(sel, spec)?;
    let af = arithmetical(sel, spec.f())?;
    let multiple = latmat_core::divisor::is_multiple_closed(&s)?;
    Ok(match (spec.kind(), multiple) {
        (MatrixKind::Join, true) => (
            arith::lcm_det_multiple_closed(&s, &af)?,
            "dirichlet (multiple-closed)",
        ),
        (MatrixKind::Join, false) => (
            arith::lcm_det_lcm_closed(&s, &af)?,
            "dirichlet (lcm-closed)",
        ),
        (MatrixKind::Meet, true) => (
            arith::gcd_det_multiple_closed(&s, &af)?,
            "dirichlet (multiple-closed)",
        ),
        (MatrixKind::Meet, false) => (
            arith::gcd_det_lcm_closed(&s, &af)?,
            "dirichlet (lcm-closed)",
        ),
    })
}

fn dirichlet_inverse(sel: &Selection, spec: &MatrixSpec) -> Result<RatMatrix, CliError> {
    let s = dirichlet_set(sel, spec)?;
    let af = arithmetical(sel, spec.f())?;
    Ok(match spec.kind() {
        MatrixKind::Join => arith::lcm_inverse_multiple_closed(&s, &af)?,
        MatrixKind::Meet => arith::gcd_inverse_multiple_closed(&s, &af)?,
    })
}

pub fn build(args: &BuildArgs, out: &mut String) -> Result<(), CliError> {
    let (_, spec) = prepare(&args.matrix)?;
    write_matrix(out, "matrix", &build_matrix(&spec)?);
    if !args.factors {
        return Ok(());
    }
    let psi_line = |out: &mut String, psi: &latmat_core::PsiVector| {
        let ids: Vec<String> = psi.basis().ids().iter().map(ToString::to_string).collect();
        let vals: Vec<String> = psi.values().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "basis: {}", ids.join(" "));
        let _ = writeln!(out, "psi: {}", vals.join(" "));
    };
    match spec.kind() {
        MatrixKind::Join => {
            let fac = factorize_join(&spec)?;
            psi_line(out, &fac.psi);
            write_matrix(out, "E(X)", &fac.e_x);
            write_matrix(out, "E(Y)", &fac.e_y);
        }
        MatrixKind::Meet => {
            let fac = factorize_meet(&spec)?;
            psi_line(out, &fac.psi);
            write_matrix(out, "Delta(X)", &fac.delta_x);
            write_matrix(out, "E(X)", &fac.e_x);
            write_matrix(out, "E(Y)", &fac.e_y);
            write_matrix(out, "Delta(Y)", &fac.delta_y);
        }
    }
    Ok(())
}

pub fn det(args: &MatrixArgs, out: &mut String) -> Result<(), CliError> {
    let method = match args.method.as_str() {
        "auto" => Some(DetMethod::Auto),
        "cauchy-binet" => Some(DetMethod::CauchyBinet),
        "join-closed" => Some(DetMethod::JoinClosed),
        "upper-closed" => Some(DetMethod::UpperClosed),
        "dirichlet" => None,
        other => {
            return Err(unknown_method(
                other,
                "auto, cauchy-binet, join-closed, upper-closed, dirichlet",
            ))
        }
    };
    let (sel, spec) = prepare(args)?;
    let m = build_matrix(&spec)?;
    write_matrix(out, "matrix", &m);
    let (value, name) = match method {
        Some(method) => {
            let o = det_closed_form(&spec, method, &config(args))?;
            (o.value, det_method_name(o.method))
        }
        None => dirichlet_det(&sel, &spec)?,
    };
    let _ = writeln!(out, "method: {name}");
    let _ = writeln!(out, "det: {value}");
    if args.check {
        let oracle = oracle_det(&m)?;
        let _ = writeln!(out, "oracle: {oracle}");
        verdict(out, oracle == value)?;
    }
    Ok(())
}

pub fn inv(args: &MatrixArgs, out: &mut String) -> Result<(), CliError> {
    let method = match args.method.as_str() {
        "auto" => Some(InverseMethod::Auto),
        "cofactor-cb" => Some(InverseMethod::CofactorCauchyBinet),
        "join-closed" => Some(InverseMethod::JoinClosed),
        "upper-closed" => Some(InverseMethod::UpperClosed),
        "dirichlet" => None,
        other => {
            return Err(unknown_method(
                other,
                "auto, cofactor-cb, join-closed, upper-closed, dirichlet",
            ))
        }
    };
    let (sel, spec) = prepare(args)?;
    let m = build_matrix(&spec)?;
    write_matrix(out, "matrix", &m);
    let (b, name) = match method {
        Some(method) => {
            let o = inverse_closed_form(&spec, method, &config(args))?;
            (o.matrix, inverse_method_name(o.method))
        }
        None => (
            dirichlet_inverse(&sel, &spec)?,
            "dirichlet (multiple-closed)",
        ),
    };
    let _ = writeln!(out, "method: {name}");
    write_matrix(out, "inverse", &b);
    if args.check {
        let oracle = match oracle_inverse(&m) {
            Ok(inv) => inv,
            Err(latmat_core::Error::SingularMatrix) => {
                let _ = writeln!(out, "oracle: singular");
                return verdict(out, false);
            }
            Err(e) => return Err(e.into()),
        };
        write_matrix(out, "oracle", &oracle);
        verdict(out, oracle == b)?;
    }
    Ok(())
}
