//! Closed forms, recurrences, composition laws and generating functions for
//! the family polynomials, independent of any diagram.
//!
//! Open chain families obey `K_n(x) = x (x^-1 K_1(x))^n`; their closures obey
//! `closure(K_n)(x) = (alpha + x beta)^n + (x^2 - 1) alpha^n`, where
//! `(alpha, beta)` are the component polynomials of the generator, defined by
//!
//! ```text
//! K(x)          = x^2 beta(x) + x alpha(x)
//! closure(K)(x) = x^2 alpha(x) + x beta(x)
//! ```
//!
//! Everything is implemented twice: once expanded (closed form) and once
//! iterated (recurrence); the two must agree exactly, and the `diagram` route
//! provides the third, independent check.

use crate::algebra::{series_rational_expand, AlgebraError, Polynomial, Series};
use crate::families::{Family, FamilySpec};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("the pair is not a consistent (knot, closure) polynomial pair")]
    NotDivisible,
    #[error("component solve produced a negative coefficient; wrong closure pairing")]
    NegativeComponent,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The two component polynomials of a knot polynomial relative to a closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub alpha: Polynomial,
    pub beta: Polynomial,
}

fn p(coeffs: &[i64]) -> Polynomial {
    Polynomial::from_ints(coeffs)
}

/// Generator polynomial divided by `x`: the factor in `K_n(x) = x g(x)^n`.
fn open_generator(family: Family) -> Option<Polynomial> {
    match family {
        Family::Unknot => Some(p(&[1])),
        Family::TwistLoop => Some(p(&[1, 1])),
        Family::Link => Some(p(&[2, 2])),
        Family::TwistLink => Some(p(&[2, 4, 2])),
        Family::Hitch | Family::Overhand => Some(p(&[3, 4, 1])),
        _ => None,
    }
}

/// Component pair `(alpha, beta)` of a closure family's generator.
fn closure_generator_components(family: Family) -> Option<(Polynomial, Polynomial)> {
    match family {
        Family::Foil => Some((p(&[1]), p(&[1]))),
        Family::ChainLink => Some((p(&[2, 1]), p(&[1]))),
        Family::TwistBracelet => Some((p(&[2, 1]), p(&[3, 2]))),
        Family::Ringbolt => Some((p(&[3, 2]), p(&[2, 1]))),
        Family::Sinnet => Some((p(&[3, 3, 1]), p(&[1]))),
        _ => None,
    }
}

/// `(alpha, G)` pairs for the alternative closures, whose polynomials read
/// `G^n + (x^2 - 1) alpha^n`.
fn alt_parts(family: Family) -> Option<(Polynomial, Polynomial)> {
    match family {
        Family::AltA => Some((p(&[1, 1]), p(&[1, 2, 1]))),
        Family::AltB => Some((p(&[1, 1]), p(&[1, 3, 3, 1]))),
        Family::AltC => Some((p(&[1, 2, 1]), p(&[1, 3, 3, 1]))),
        Family::AltD => Some((p(&[2, 3, 1]), p(&[2, 4, 2]))),
        Family::AltE => Some((p(&[2, 2]), p(&[2, 4, 2]))),
        _ => None,
    }
}

/// The closed-form family polynomial.
pub fn family_poly_closed(spec: FamilySpec) -> Polynomial {
    let n = spec.n;
    let x2m1 = p(&[-1, 0, 1]);
    if let Some(g) = open_generator(spec.family) {
        return g.pow(n).shift_up();
    }
    if let Some((alpha, beta)) = closure_generator_components(spec.family) {
        let full = &alpha + &beta.shift_up();
        return &full.pow(n) + &(&x2m1 * &alpha.pow(n));
    }
    if let Some((alpha, g)) = alt_parts(spec.family) {
        return &g.pow(n) + &(&x2m1 * &alpha.pow(n));
    }
    debug_assert_eq!(spec.family, Family::TwistKnot);
    // 2 (x+1)^(n+1) + x^3 + 2x^2 - x - 2
    let lead = &p(&[2]) * &p(&[1, 1]).pow(n + 1);
    &lead + &p(&[-2, -1, 2, 1])
}

/// The family polynomial obtained by iterating the recurrence from its base
/// case; must equal [`family_poly_closed`].
pub fn family_poly_recurrence(spec: FamilySpec) -> Polynomial {
    let n = spec.n;
    match spec.family {
        Family::Unknot => Polynomial::x(),
        Family::TwistLoop | Family::Link | Family::TwistLink | Family::Hitch | Family::Overhand => {
            let g = open_generator(spec.family).unwrap();
            let mut acc = Polynomial::x();
            for _ in 0..n {
                acc = &acc * &g;
            }
            acc
        }
        // foil_n = foil_{n-1} + twist_{n-1}
        Family::Foil => {
            let mut acc = p(&[0, 0, 1]);
            for k in 0..n {
                acc = &acc + &family_poly_recurrence(FamilySpec::new(Family::TwistLoop, k));
            }
            acc
        }
        Family::ChainLink => closure_recurrence(n, p(&[2, 1]), p(&[1]), Family::Link),
        Family::TwistBracelet => closure_recurrence(n, p(&[2, 1]), p(&[3, 2]), Family::TwistLink),
        Family::Ringbolt => closure_recurrence(n, p(&[3, 2]), p(&[2, 1]), Family::Hitch),
        Family::Sinnet => closure_recurrence(n, p(&[3, 3, 1]), p(&[1]), Family::Overhand),
        // (x+2) foil_n + twist_n
        Family::TwistKnot => {
            let foil = family_poly_recurrence(FamilySpec::new(Family::Foil, n));
            let twist = family_poly_recurrence(FamilySpec::new(Family::TwistLoop, n));
            &(&p(&[2, 1]) * &foil) + &twist
        }
        Family::AltA => alt_recurrence(n, p(&[1, 1]), p(&[1, 1]), 2),
        Family::AltB => alt_recurrence(n, p(&[1, 1]), p(&[2, 3, 1]), 3),
        Family::AltC => alt_recurrence(n, p(&[1, 2, 1]), p(&[1, 2, 1]), 3),
        Family::AltD => alt_recurrence_over(n, p(&[2, 3, 1]), p(&[1, 1]), Family::TwistLink),
        Family::AltE => alt_recurrence_over(n, p(&[2, 2]), p(&[2, 2]), Family::TwistLink),
    }
}

/// `closure_n = alpha * closure_{n-1} + beta * open_{n-1}`, from `x^2`.
fn closure_recurrence(n: usize, alpha: Polynomial, beta: Polynomial, open: Family) -> Polynomial {
    let mut acc = p(&[0, 0, 1]);
    for k in 0..n {
        let open_k = family_poly_recurrence(FamilySpec::new(open, k));
        acc = &(&alpha * &acc) + &(&beta * &open_k);
    }
    acc
}

/// `alt_n = step * alt_{n-1} + carry * twist_{stride*(n-1)}`, from `x^2`.
fn alt_recurrence(n: usize, step: Polynomial, carry: Polynomial, stride: usize) -> Polynomial {
    let mut acc = p(&[0, 0, 1]);
    for k in 0..n {
        let twists = family_poly_recurrence(FamilySpec::new(Family::TwistLoop, stride * k));
        acc = &(&step * &acc) + &(&carry * &twists);
    }
    acc
}

/// Same shape, feeding on another open family.
fn alt_recurrence_over(n: usize, step: Polynomial, carry: Polynomial, open: Family) -> Polynomial {
    let mut acc = p(&[0, 0, 1]);
    for k in 0..n {
        let open_k = family_poly_recurrence(FamilySpec::new(open, k));
        acc = &(&step * &acc) + &(&carry * &open_k);
    }
    acc
}

/// Connected-sum composition law: `(K # K')(x) = x^-1 K(x) K'(x)`.
pub fn csum_poly(a: &Polynomial, b: &Polynomial) -> Result<Polynomial, AlgebraError> {
    (a * b).shift_down()
}

/// `K_n(x) = x (x^-1 K(x))^n` for the `n`-fold connected sum of `K`.
///
/// The empty product makes `K_0 = U` for any input.
pub fn generated_poly(k: &Polynomial, n: usize) -> Result<Polynomial, AlgebraError> {
    if n == 0 {
        return Ok(Polynomial::x());
    }
    Ok(k.shift_down()?.pow(n).shift_up())
}

/// Solves the component equations for `(alpha, beta)` given `K(x)` and the
/// closure polynomial.
///
/// Both `x*closed - k` and `x*k - closed` must be exactly divisible by
/// `x^3 - x`, and the solutions must be nonnegative; failures signal an
/// inconsistent or wrongly paired input.
pub fn components_solve(k: &Polynomial, k_closed: &Polynomial) -> Result<Components, FormulaError> {
    let divisor = p(&[0, -1, 0, 1]);
    let alpha = (&k_closed.shift_up() - k)
        .div_exact(&divisor)
        .map_err(|_| FormulaError::NotDivisible)?;
    let beta = (&k.shift_up() - k_closed)
        .div_exact(&divisor)
        .map_err(|_| FormulaError::NotDivisible)?;
    if !alpha.has_nonnegative_coeffs() || !beta.has_nonnegative_coeffs() {
        return Err(FormulaError::NegativeComponent);
    }
    Ok(Components { alpha, beta })
}

/// Closure of the `n`-fold generated knot:
/// `(alpha + x beta)^n + (x^2 - 1) alpha^n`.
pub fn closure_of_generated(c: &Components, n: usize) -> Polynomial {
    let full = &c.alpha + &c.beta.shift_up();
    &full.pow(n) + &(&p(&[-1, 0, 1]) * &c.alpha.pow(n))
}

/// Closure of a connected sum:
/// `closure(K # K')(x) = alpha_K(x) closure(K')(x) + beta_K(x) K'(x)`.
pub fn closure_of_csum(
    c: &Components,
    kprime: &Polynomial,
    kprime_closed: &Polynomial,
) -> Polynomial {
    &(&c.alpha * kprime_closed) + &(&c.beta * kprime)
}

/// Rational generating function of a family, as `(numerator, denominator)`
/// lists of polynomial-in-`x` coefficients by power of `y`.
pub fn family_gf_rational(family: Family) -> (Vec<Polynomial>, Vec<Polynomial>) {
    // open families: x / (1 - y g)
    if let Some(g) = open_generator(family) {
        return (vec![Polynomial::x()], vec![Polynomial::one(), -&g]);
    }
    // twist knots: (2x+2)/(1 - y(x+1)) + (x^3+2x^2-x-2)/(1 - y)
    if family == Family::TwistKnot {
        let a = p(&[2, 2]);
        let b = p(&[-2, -1, 2, 1]);
        let numer = vec![&a + &b, -&(&a + &(&b * &p(&[1, 1])))];
        let denom = vec![Polynomial::one(), -&p(&[2, 1]), p(&[1, 1])];
        return (numer, denom);
    }
    // closures: 1/(1 - y alpha) (x^2 + y x carry / (1 - y G))
    let (alpha, carry, g) = if let Some((alpha, beta)) = closure_generator_components(family) {
        let open = match family {
            Family::Foil => Family::TwistLoop,
            Family::ChainLink => Family::Link,
            Family::TwistBracelet => Family::TwistLink,
            Family::Ringbolt => Family::Hitch,
            _ => Family::Overhand,
        };
        (alpha, beta, open_generator(open).unwrap())
    } else {
        let (alpha, g) = alt_parts(family).expect("gf covers the full catalog");
        let carry = match family {
            Family::AltA => p(&[1, 1]),
            Family::AltB => p(&[2, 3, 1]),
            Family::AltC => p(&[1, 2, 1]),
            Family::AltD => p(&[1, 1]),
            _ => p(&[2, 2]),
        };
        (alpha, carry, g)
    };
    // = (x^2 + y (x carry - x^2 G)) / ((1 - y alpha)(1 - y G))
    let x2 = p(&[0, 0, 1]);
    let numer = vec![x2.clone(), &carry.shift_up() - &(&x2 * &g)];
    let denom = vec![Polynomial::one(), -&(&alpha + &g), &alpha * &g];
    (numer, denom)
}

/// Series expansion of the family's generating function up to `y^order`.
pub fn family_gf(family: Family, order: usize) -> Result<Series, AlgebraError> {
    let (numer, denom) = family_gf_rational(family);
    series_rational_expand(&numer, &denom, order)
}

/// Coefficient of `x^k` in the closed-form family polynomial.
pub fn coefficient(spec: FamilySpec, k: usize) -> BigInt {
    family_poly_closed(spec).coeff(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build;

    fn closed(f: Family, n: usize) -> Polynomial {
        family_poly_closed(FamilySpec::new(f, n))
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed(Family::Hitch, 2), p(&[0, 9, 24, 22, 8, 1]));
        assert_eq!(closed(Family::ChainLink, 0), p(&[0, 0, 1]));
        assert_eq!(closed(Family::AltD, 2), p(&[0, 4, 15, 22, 16, 6, 1]));
    }

    #[test]
    fn recurrence_matches_closed_form_for_all_families() {
        for family in Family::ALL {
            for n in 0..=6 {
                let spec = FamilySpec::new(family, n);
                assert_eq!(
                    family_poly_recurrence(spec),
                    family_poly_closed(spec),
                    "{family} n={n}"
                );
            }
        }
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(
            family_poly_recurrence(FamilySpec::new(Family::TwistLoop, 3)),
            p(&[0, 1, 3, 3, 1])
        );
        assert_eq!(
            family_poly_recurrence(FamilySpec::new(Family::Foil, 1)),
            p(&[0, 1, 1])
        );
        assert_eq!(
            family_poly_recurrence(FamilySpec::new(Family::Ringbolt, 1)),
            p(&[0, 2, 4, 2])
        );
    }

    #[test]
    fn csum_poly_examples() {
        let q = p(&[0, 5, 7, 2]);
        assert_eq!(csum_poly(&Polynomial::x(), &q).unwrap(), q);
        assert_eq!(
            csum_poly(&p(&[0, 2, 2]), &p(&[0, 1, 1])).unwrap(),
            p(&[0, 2, 4, 2])
        );
        assert_eq!(
            csum_poly(&p(&[0, 1, 1]), &p(&[0, 1, 1])).unwrap(),
            p(&[0, 1, 2, 1])
        );
    }

    #[test]
    fn generated_poly_examples() {
        assert_eq!(generated_poly(&p(&[0, 9, 4]), 0).unwrap(), Polynomial::x());
        assert_eq!(
            generated_poly(&p(&[0, 1, 1]), 5).unwrap(),
            p(&[0, 1, 5, 10, 10, 5, 1])
        );
        assert_eq!(
            generated_poly(&p(&[0, 3, 4, 1]), 2).unwrap(),
            p(&[0, 9, 24, 22, 8, 1])
        );
    }

    #[test]
    fn components_solve_examples() {
        let u = components_solve(&Polynomial::x(), &p(&[0, 0, 1])).unwrap();
        assert_eq!(u.alpha, Polynomial::one());
        assert_eq!(u.beta, Polynomial::zero());

        let l1 = components_solve(&p(&[0, 2, 2]), &p(&[0, 1, 2, 1])).unwrap();
        assert_eq!(l1.alpha, p(&[2, 1]));
        assert_eq!(l1.beta, Polynomial::one());

        let h1 = components_solve(&p(&[0, 3, 4, 1]), &p(&[0, 2, 4, 2])).unwrap();
        assert_eq!(h1.alpha, p(&[3, 2]));
        assert_eq!(h1.beta, p(&[2, 1]));
    }

    #[test]
    fn components_solve_rejects_bad_pairs() {
        assert_eq!(
            components_solve(&p(&[0, 1, 1]), &p(&[0, 0, 0, 1])),
            Err(FormulaError::NotDivisible)
        );
        // divisible pair whose alpha solve is 1 - x + x^2
        assert_eq!(
            components_solve(&p(&[0, 1, 0, 2, 1]), &p(&[0, 1, 2, 0, 1])),
            Err(FormulaError::NegativeComponent)
        );
    }

    #[test]
    fn closure_of_generated_examples() {
        let t1 = Components {
            alpha: Polynomial::one(),
            beta: Polynomial::one(),
        };
        assert_eq!(closure_of_generated(&t1, 4), p(&[0, 4, 7, 4, 1]));
        assert_eq!(closure_of_generated(&t1, 0), p(&[0, 0, 1]));

        let w1 = Components {
            alpha: p(&[2, 1]),
            beta: p(&[3, 2]),
        };
        assert_eq!(closure_of_generated(&w1, 2), p(&[0, 12, 27, 20, 5]));
    }

    #[test]
    fn closure_of_csum_examples() {
        let l1 = Components {
            alpha: p(&[2, 1]),
            beta: Polynomial::one(),
        };
        for n in 0..=6 {
            let tn = closed(Family::TwistLoop, n);
            let tn_closed = closed(Family::Foil, n);
            assert_eq!(
                closure_of_csum(&l1, &tn, &tn_closed),
                closed(Family::TwistKnot, n)
            );
        }
        // K' = U reproduces the closure definition x^2 alpha + x beta
        let u_closed = closure_of_csum(&l1, &Polynomial::x(), &p(&[0, 0, 1]));
        assert_eq!(u_closed, p(&[0, 1, 2, 1]));

        let t1 = Components {
            alpha: Polynomial::one(),
            beta: Polynomial::one(),
        };
        assert_eq!(
            closure_of_csum(&t1, &p(&[0, 1, 1]), &p(&[0, 1, 1])),
            p(&[0, 2, 2])
        );
    }

    #[test]
    fn gf_term_examples() {
        let t = family_gf(Family::TwistLoop, 3).unwrap();
        assert_eq!(t.term(3), &p(&[0, 1, 3, 3, 1]));

        let s = family_gf(Family::Sinnet, 1).unwrap();
        assert_eq!(s.term(1), &p(&[0, 1, 3, 3, 1]));

        for family in Family::ALL {
            let gf = family_gf(family, 0).unwrap();
            let expected = family_poly_closed(FamilySpec::new(family, 0));
            assert_eq!(gf.term(0), &expected, "{family}");
        }
    }

    #[test]
    fn gf_matches_closed_forms_to_order_eight() {
        for family in Family::ALL {
            let gf = family_gf(family, 8).unwrap();
            for n in 0..=8 {
                assert_eq!(
                    gf.term(n),
                    &family_poly_closed(FamilySpec::new(family, n)),
                    "{family} n={n}"
                );
            }
        }
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(
            coefficient(FamilySpec::new(Family::TwistLoop, 4), 3),
            BigInt::from(6)
        );
        assert_eq!(
            coefficient(FamilySpec::new(Family::ChainLink, 5), 4),
            BigInt::from(230)
        );
        assert_eq!(
            coefficient(FamilySpec::new(Family::AltC, 5), 8),
            BigInt::from(6600)
        );
    }

    #[test]
    fn closed_forms_match_brute_force_small() {
        for family in Family::ALL {
            for n in 0..=2 {
                let spec = FamilySpec::new(family, n);
                let brute = build(spec).unwrap().state_sum().unwrap();
                assert_eq!(brute, family_poly_closed(spec), "{family} n={n}");
            }
        }
    }
}
