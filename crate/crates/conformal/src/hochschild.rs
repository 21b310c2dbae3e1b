//! Hochschild coboundary of `τ(a, b, c) = ∫ a Ω(b, c)`.
//!
//! `(bτ)(f₀, f₁, f₂, f₃) = ∫ f₀ [f₁Ω(f₂,f₃) − Ω(f₁f₂,f₃) + Ω(f₁,f₂f₃) − f₃Ω(f₁,f₂)]`
//! is computed pointwise: the bracket is an integrand, not a class modulo
//! divergences.

use num_traits::One;
use wforms_core::Rational;
use wforms_tensor::leibniz::leibniz_substitute;
use wforms_tensor::{Engine, Expr, Factor, Head};

use crate::error::ConformalError;

/// Renames the function heads `f`, `h` of a bilinear form.
pub fn rename_arguments(e: &Expr, f: Head, h: Head) -> Expr {
    e.iter()
        .map(|(m, c)| {
            let mm = m
                .iter()
                .map(|x| {
                    let mut x = x.clone();
                    x.head = match x.head {
                        Head::F => f,
                        Head::H => h,
                        other => other,
                    };
                    x
                })
                .collect();
            (mm, c.clone())
        })
        .collect()
}

fn times_function(e: &Expr, head: Head) -> Expr {
    e.iter()
        .map(|(m, c)| {
            let mut mm = m.clone();
            mm.push(Factor::scalar(head));
            (mm, c.clone())
        })
        .collect()
}

/// The unnormalized integrand `f₀ · [ … ]` for a bilinear form in `f`, `h`.
pub fn hochschild_coboundary_raw(omega: &Expr) -> Result<Expr, ConformalError> {
    if omega.iter().any(|(m, _)| m.iter().any(|x| matches!(x.head, Head::F0 | Head::F1 | Head::F2 | Head::F3))) {
        return Err(ConformalError::Unsupported("form already uses the cochain arguments".into()));
    }
    let a = times_function(&rename_arguments(omega, Head::F2, Head::F3), Head::F1);
    // Ω(f₁f₂, f₃): substitute f ↦ f₁f₂ through a placeholder
    let b = leibniz_substitute(&rename_arguments(omega, Head::F0, Head::F3), Head::F0, (Head::F1, Head::F2))?;
    let c = leibniz_substitute(&rename_arguments(omega, Head::F1, Head::F0), Head::F0, (Head::F2, Head::F3))?;
    let d = times_function(&rename_arguments(omega, Head::F1, Head::F2), Head::F3);
    let mut total = a;
    total.add_scaled(&b, &-Rational::one());
    total.add_scaled(&c, &Rational::one());
    total.add_scaled(&d, &-Rational::one());
    Ok(times_function(&total, Head::F0))
}

/// Normal form of the coboundary integrand.
pub fn hochschild_coboundary(engine: &Engine, omega: &Expr) -> Result<Expr, ConformalError> {
    Ok(engine.canonicalize(&hochschild_coboundary_raw(omega)?))
}
