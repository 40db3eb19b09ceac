//! Coefficients, monomials, polynomials and presented rings.

pub mod field;
pub mod monomial;
pub mod parse;
pub mod poly;

use serde::{Deserialize, Serialize};

pub use field::{PrimeField, Scalar, DEFAULT_CHAR};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_polynomial, parse_ring};
pub use poly::Polynomial;

use crate::error::{Error, Result};

/// Whether a ring is read as local at the origin or as a standard graded ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Local,
    Graded,
}

/// `k[x_1..x_n]/I`, read locally at the origin (or graded).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    field: PrimeField,
    vars: Vec<String>,
    gens: Vec<Polynomial>,
    model: Model,
}

impl RingSpec {
    pub fn new(field: PrimeField, vars: Vec<String>, gens: Vec<Polynomial>, model: Model) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.nvars() != vars.len() {
                return Err(Error::DimensionMismatch {
                    expected: vars.len(),
                    found: g.nvars(),
                });
            }
            if g.field() != field {
                return Err(Error::Invalid(format!("generator {i} lives over a different field")));
            }
            if g.is_zero() {
                return Err(Error::Invalid(format!("generator {i} is zero")));
            }
            if g.constant_term() != 0 {
                return Err(Error::UnitGenerator { index: i });
            }
            if model == Model::Graded && !g.is_homogeneous() {
                return Err(Error::NotHomogeneous { index: i });
            }
        }
        Ok(RingSpec {
            field,
            vars,
            gens,
            model,
        })
    }

    /// Same ring read over a different prime field (coefficients reduced
    /// through their symmetric integer representatives).
    pub fn with_char(&self, p: u64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let terms = g
                    .terms()
                    .iter()
                    .map(|(m, c)| (m.clone(), field.from_i64(self.field.to_symmetric(*c))))
                    .collect();
                Polynomial::from_terms(field, self.nvars(), terms)
            })
            .filter(|g| !g.is_zero())
            .collect();
        RingSpec::new(field, self.vars.clone(), gens, self.model)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn poly(&self, text: &str) -> Result<Polynomial> {
        parse_polynomial(text, &self.vars, self.field)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.field, self.nvars(), i)
    }

    pub fn fmt_poly(&self, p: &Polynomial) -> String {
        p.fmt_with(&self.vars)
    }

    /// Serializes to the ring-description format accepted by [`parse_ring`].
    pub fn to_text(&self) -> String {
        let ideal: Vec<String> = self
            .gens
            .iter()
            .map(|g| format!("\"{}\"", self.fmt_poly(g)))
            .collect();
        format!(
            "ring {{ char = {}; vars = [{}]; model = {}; ideal = [{}] }}",
            self.field.characteristic(),
            self.vars.join(", "),
            match self.model {
                Model::Local => "local",
                Model::Graded => "graded",
            },
            ideal.join(", ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DESTEFANI: &str =
        "ring { char = 32003; vars = [x, y, z]; model = local; ideal = [\"x^2-y^5\", \"x*y^2+y*z^3-z^5\"] }";

    #[test]
    fn parses_destefani() {
        let r = parse_ring(DESTEFANI).unwrap();
        assert_eq!(r.gens().len(), 2);
        assert_eq!(r.nvars(), 3);
        assert_eq!(r.model(), Model::Local);
        assert_eq!(r.gens()[0], r.poly("x^2 - y^5").unwrap());
    }

    #[test]
    fn regular_ring() {
        let r = parse_ring("ring { vars = [x]; ideal = [] }").unwrap();
        assert!(r.gens().is_empty());
        assert_eq!(r.field().characteristic(), DEFAULT_CHAR);
    }

    #[test]
    fn unit_generator_rejected() {
        assert_eq!(
            parse_ring("ring { vars = [x]; ideal = [\"1+x\"] }"),
            Err(Error::UnitGenerator { index: 0 })
        );
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(
            parse_ring("ring { char = 32001; vars = [x]; ideal = [] }"),
            Err(Error::NotPrime(32001))
        );
    }

    #[test]
    fn graded_needs_homogeneous() {
        assert_eq!(
            parse_ring("ring { vars = [x, y]; model = graded; ideal = [\"x^2-y^3\"] }"),
            Err(Error::NotHomogeneous { index: 0 })
        );
    }

    #[test]
    fn round_trip() {
        let r = parse_ring(DESTEFANI).unwrap();
        assert_eq!(parse_ring(&r.to_text()).unwrap(), r);
    }
}
