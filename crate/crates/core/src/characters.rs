//! Additive and multiplicative characters of GF(q) and their Gauss sums.

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};

pub type ComplexValue = Complex64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("multiplicative character evaluated at zero")]
    ZeroArgument,
    #[error("characters belong to different fields")]
    FieldMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// e^(2 pi i k / n). Quarter turns are returned exactly.
pub fn root_of_unity(k: i64, n: u64) -> ComplexValue {
    let n_i = n as i64;
    let k = k.rem_euclid(n_i);
    if (4 * k) % n_i == 0 {
        return match 4 * k / n_i {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, TAU * k as f64 / n as f64)
}

/// psi_b(x) = zeta_p^{T(bx)}.
#[derive(Debug, Clone)]
pub struct AdditiveCharacter<'f> {
    field: &'f FieldSpec,
    b: FieldElement,
}

impl<'f> AdditiveCharacter<'f> {
    pub fn new(field: &'f FieldSpec, b: FieldElement) -> Result<Self, CharacterError> {
        // re-validate so a foreign element cannot slip in
        let coeffs: Vec<u64> = b.coeffs().iter().map(|&c| c as u64).collect();
        let b = field.element(&coeffs)?;
        Ok(AdditiveCharacter { field, b })
    }

    pub fn trivial(field: &'f FieldSpec) -> Self {
        AdditiveCharacter {
            field,
            b: field.zero(),
        }
    }

    pub fn twist(&self) -> &FieldElement {
        &self.b
    }

    pub fn field(&self) -> &'f FieldSpec {
        self.field
    }

    pub fn is_trivial(&self) -> bool {
        self.b.is_zero()
    }

    pub fn eval(&self, x: &FieldElement) -> ComplexValue {
        let t = self.field.trace(&self.field.mul(&self.b, x));
        root_of_unity(t as i64, self.field.p())
    }
}

/// omega^i with omega(gamma^j) = zeta_{q-1}^j.
#[derive(Debug, Clone)]
pub struct MultiplicativeCharacter<'f> {
    field: &'f FieldSpec,
    index: u64,
}

impl<'f> MultiplicativeCharacter<'f> {
    /// `index` is taken mod q - 1.
    pub fn new(field: &'f FieldSpec, index: u64) -> Self {
        MultiplicativeCharacter {
            field,
            index: index % (field.order() - 1),
        }
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn field(&self) -> &'f FieldSpec {
        self.field
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    pub fn eval(&self, x: &FieldElement) -> Result<ComplexValue, CharacterError> {
        let j = self.field.dlog(x).ok_or(CharacterError::ZeroArgument)?;
        let order = self.field.order() - 1;
        let k = ((self.index as u128 * j as u128) % order as u128) as i64;
        Ok(root_of_unity(k, order))
    }
}

/// G(psi, chi) = sum over nonzero x of psi(x) chi(x).
pub fn gauss_sum(
    psi: &AdditiveCharacter<'_>,
    chi: &MultiplicativeCharacter<'_>,
) -> Result<ComplexValue, CharacterError> {
    if psi.field() != chi.field() {
        return Err(CharacterError::FieldMismatch);
    }
    let field = psi.field();
    let mut sum = Complex64::new(0.0, 0.0);
    for idx in 1..field.order() {
        let x = field.from_index(idx);
        sum += psi.eval(&x) * chi.eval(&x)?;
    }
    Ok(sum)
}

/// Worst deviations seen by [`gauss_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussCheck {
    /// max | |G(psi_b, omega^i)| - sqrt(q) | over nontrivial pairs
    pub magnitude_error: f64,
    /// max |G(psi_b, chi) - conj(chi(b)) G(chi)|
    pub twist_error: f64,
    pub pairs: usize,
}

impl GaussCheck {
    pub fn passes(&self, q: u64) -> bool {
        let tol = 1e-9 * (q as f64).sqrt();
        self.magnitude_error <= tol && self.twist_error <= tol
    }
}

/// Evaluates every Gauss sum with nontrivial additive and multiplicative
/// characters and compares against |G| = sqrt(q) and the twist identity.
pub fn gauss_report(field: &FieldSpec) -> GaussCheck {
    let q = field.order();
    let sqrt_q = (q as f64).sqrt();
    let mut check = GaussCheck {
        magnitude_error: 0.0,
        twist_error: 0.0,
        pairs: 0,
    };
    let psi_one = AdditiveCharacter::new(field, field.one()).expect("one is in the field");
    for i in 1..q - 1 {
        let chi = MultiplicativeCharacter::new(field, i);
        let g_chi = gauss_sum(&psi_one, &chi).expect("same field");
        for idx in 1..q {
            let b = field.from_index(idx);
            let psi = AdditiveCharacter::new(field, b.clone()).expect("element of field");
            let g = gauss_sum(&psi, &chi).expect("same field");
            let expected = chi.eval(&b).expect("b is nonzero").conj() * g_chi;
            check.magnitude_error = check.magnitude_error.max((g.norm() - sqrt_q).abs());
            check.twist_error = check.twist_error.max((g - expected).norm());
            check.pairs += 1;
        }
    }
    check
}

/// True iff every nontrivial Gauss sum has modulus sqrt(q) and satisfies the
/// twist identity, both to 1e-9 sqrt(q). Vacuously true for GF(2).
pub fn check_gauss_magnitude(field: &FieldSpec) -> bool {
    gauss_report(field).passes(field.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn close(a: ComplexValue, b: ComplexValue, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn roots_of_unity_quarter_turns_exact() {
        assert_eq!(root_of_unity(1, 2), Complex64::new(-1.0, 0.0));
        assert_eq!(root_of_unity(3, 4), Complex64::new(0.0, -1.0));
        assert_eq!(root_of_unity(-1, 4), Complex64::new(0.0, -1.0));
        assert_eq!(root_of_unity(7, 7), Complex64::new(1.0, 0.0));
        assert!((root_of_unity(1, 3).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn additive_examples() {
        let f = make_field(2, 2).unwrap();
        let trivial = AdditiveCharacter::trivial(&f);
        for x in f.elements() {
            assert_eq!(trivial.eval(&x), Complex64::new(1.0, 0.0));
        }
        let psi = AdditiveCharacter::new(&f, f.one()).unwrap();
        assert_eq!(psi.eval(f.gamma()), Complex64::new(-1.0, 0.0));
        assert_eq!(psi.eval(&f.zero()), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn multiplicative_examples() {
        let f4 = make_field(2, 2).unwrap();
        let trivial = MultiplicativeCharacter::new(&f4, 0);
        assert_eq!(trivial.eval(f4.gamma()).unwrap(), Complex64::new(1.0, 0.0));
        let omega = MultiplicativeCharacter::new(&f4, 1);
        assert!(close(
            omega.eval(f4.gamma()).unwrap(),
            Complex64::from_polar(1.0, TAU / 3.0),
            1e-15
        ));
        let f5 = make_field(5, 1).unwrap();
        let chi = MultiplicativeCharacter::new(&f5, 2);
        assert_eq!(chi.eval(&f5.constant(2)).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(chi.eval(&f5.zero()), Err(CharacterError::ZeroArgument));
    }

    #[test]
    fn degenerate_gauss_sums() {
        for (p, m) in [(2, 2), (3, 2), (5, 1), (7, 1), (2, 4)] {
            let f = make_field(p, m).unwrap();
            let q = f.order() as f64;
            let tol = 1e-9 * q;
            let psi0 = AdditiveCharacter::trivial(&f);
            let psi1 = AdditiveCharacter::new(&f, f.one()).unwrap();
            let chi0 = MultiplicativeCharacter::new(&f, 0);
            let chi1 = MultiplicativeCharacter::new(&f, 1);
            assert!(close(gauss_sum(&psi0, &chi0).unwrap(), Complex64::new(q - 1.0, 0.0), tol));
            assert!(close(gauss_sum(&psi1, &chi0).unwrap(), Complex64::new(-1.0, 0.0), tol));
            assert!(close(gauss_sum(&psi0, &chi1).unwrap(), Complex64::new(0.0, 0.0), tol));
        }
    }

    #[test]
    fn quadratic_gauss_sum_mod_5_is_sqrt5() {
        let f = make_field(5, 1).unwrap();
        let psi = AdditiveCharacter::new(&f, f.one()).unwrap();
        let quad = MultiplicativeCharacter::new(&f, 2);
        let g = gauss_sum(&psi, &quad).unwrap();
        assert!(close(g, Complex64::new(5f64.sqrt(), 0.0), 1e-12), "{g}");
    }

    #[test]
    fn magnitude_checks() {
        assert!(check_gauss_magnitude(&make_field(2, 2).unwrap()));
        assert!(check_gauss_magnitude(&make_field(5, 1).unwrap()));
        let gf2 = make_field(2, 1).unwrap();
        assert_eq!(gauss_report(&gf2).pairs, 0);
        assert!(check_gauss_magnitude(&gf2));
        assert_eq!(gauss_report(&make_field(2, 2).unwrap()).pairs, 6);
    }

    #[test]
    fn mismatched_fields_rejected() {
        let f = make_field(2, 2).unwrap();
        let g = make_field(3, 1).unwrap();
        let psi = AdditiveCharacter::trivial(&f);
        let chi = MultiplicativeCharacter::new(&g, 1);
        assert_eq!(gauss_sum(&psi, &chi), Err(CharacterError::FieldMismatch));
    }
}
