//! tau invariants from Legendrian surgery data.
//!
//! For a knot `K` in the surgery on a Legendrian link with framing matrix
//! `Lambda`, linking vector `L` and rotation vector `V`:
//!
//! ```text
//! 2 tau(+-K) - 1 = tb(K) - L^T Lambda^{-1} L +- L^T Lambda^{-1} V
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{inverse_exact, pairing, RationalMatrix, SymIntMatrix};

/// The framing matrix, given either directly or through its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Framing {
    Lambda(SymIntMatrix),
    LambdaInverse(RationalMatrix),
}

/// Numeric data of a Legendrian surgery presentation and a knot in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryPresentation {
    framing: Framing,
    lambda: SymIntMatrix,
    lambda_inverse: RationalMatrix,
    pub tb: Vec<i64>,
    pub rot: Vec<i64>,
    pub linking: Vec<i64>,
    pub knot_tb: i64,
}

impl SurgeryPresentation {
    pub fn new(
        framing: Framing,
        tb: Vec<i64>,
        rot: Vec<i64>,
        linking: Vec<i64>,
        knot_tb: i64,
    ) -> Result<Self> {
        let (lambda, lambda_inverse) = match &framing {
            Framing::Lambda(m) => (m.clone(), inverse_exact(m)?),
            Framing::LambdaInverse(inv) => {
                let lambda = inv.inverse()?;
                let rows = lambda.to_integer_rows().ok_or_else(|| {
                    Error::InvalidPresentation("inverse of lambda_inverse is not integral".into())
                })?;
                (SymIntMatrix::from_rows(&rows)?, inv.clone())
            }
        };
        let n = lambda.dim();
        for (name, len) in [
            ("tb", tb.len()),
            ("rot", rot.len()),
            ("linking", linking.len()),
        ] {
            if len != n {
                return Err(Error::InvalidPresentation(format!(
                    "{name} has length {len}, expected {n} components"
                )));
            }
        }
        if n > 0 && lambda.determinant().is_zero() {
            return Err(Error::Singular { det: "0".into() });
        }
        for (i, &t) in tb.iter().enumerate() {
            if lambda.get(i, i) != t - 1 {
                return Err(Error::InvalidPresentation(format!(
                    "component {i}: lambda_ii = {} but tb - 1 = {}",
                    lambda.get(i, i),
                    t - 1
                )));
            }
        }
        Ok(Self {
            framing,
            lambda,
            lambda_inverse,
            tb,
            rot,
            linking,
            knot_tb,
        })
    }

    /// A knot with no surgery link.
    pub fn empty(knot_tb: i64) -> Self {
        Self::new(
            Framing::Lambda(SymIntMatrix::identity(0)),
            vec![],
            vec![],
            vec![],
            knot_tb,
        )
        .expect("empty presentation is valid")
    }

    pub fn components(&self) -> usize {
        self.lambda.dim()
    }

    pub fn framing(&self) -> &Framing {
        &self.framing
    }

    pub fn lambda(&self) -> &SymIntMatrix {
        &self.lambda
    }

    pub fn lambda_inverse(&self) -> &RationalMatrix {
        &self.lambda_inverse
    }

    pub fn with_rot(&self, rot: Vec<i64>) -> Result<Self> {
        Self::new(
            self.framing.clone(),
            self.tb.clone(),
            rot,
            self.linking.clone(),
            self.knot_tb,
        )
    }

    /// `L^T Lambda^{-1} L`: the self-intersection of the capped surface.
    pub fn linking_square(&self) -> BigRational {
        if self.components() == 0 {
            return BigRational::zero();
        }
        pairing(&self.linking, &self.lambda_inverse, &self.linking).expect("lengths validated")
    }

    /// `L^T Lambda^{-1} V`: the Chern class evaluated on the capped surface.
    pub fn rotation_pairing(&self) -> BigRational {
        if self.components() == 0 {
            return BigRational::zero();
        }
        pairing(&self.linking, &self.lambda_inverse, &self.rot).expect("lengths validated")
    }
}

/// Both sign choices of the surgery formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauPair {
    pub tau_plus: BigRational,
    pub tau_minus: BigRational,
    pub linking_square: BigRational,
    pub rotation_pairing: BigRational,
}

impl TauPair {
    /// The two values sorted ascending.
    pub fn as_set(&self) -> [BigRational; 2] {
        let mut s = [self.tau_plus.clone(), self.tau_minus.clone()];
        s.sort();
        s
    }

    pub fn max(&self) -> BigRational {
        self.as_set()[1].clone()
    }

    pub fn is_integral(&self) -> bool {
        self.tau_plus.is_integer() && self.tau_minus.is_integer()
    }
}

pub fn tau_pair(p: &SurgeryPresentation) -> TauPair {
    let two = BigRational::from_integer(BigInt::from(2));
    let tb = BigRational::from_integer(BigInt::from(p.knot_tb));
    let ll = p.linking_square();
    let lv = p.rotation_pairing();
    let base = &tb - &ll + BigRational::one();
    TauPair {
        tau_plus: (&base + &lv) / &two,
        tau_minus: (&base - &lv) / &two,
        linking_square: ll,
        rotation_pairing: lv,
    }
}

/// Genus of a Lagrangian filling of a Legendrian knot: `(tb + 1) / 2`.
pub fn lagrangian_slice_genus(knot_tb: i64) -> Result<i64> {
    if knot_tb < -1 || knot_tb.rem_euclid(2) != 1 {
        return Err(Error::InvalidThurstonBennequin(knot_tb));
    }
    Ok((knot_tb + 1) / 2)
}

/// JSON form: exactly one of `lambda` / `lambda_inverse`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_inverse: Option<Vec<Vec<i64>>>,
    pub tb: Vec<i64>,
    pub rot: Vec<i64>,
    pub linking: Vec<i64>,
    pub knot_tb: i64,
    /// Free-form provenance notes; ignored by the computation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PresentationDocument {
    pub fn to_presentation(&self) -> Result<SurgeryPresentation> {
        let framing = match (&self.lambda, &self.lambda_inverse) {
            (Some(l), None) => Framing::Lambda(SymIntMatrix::from_rows(l)?),
            (None, Some(inv)) => Framing::LambdaInverse(RationalMatrix::from_integer_rows(inv)?),
            (Some(_), Some(_)) => {
                return Err(Error::InvalidPresentation(
                    "give either lambda or lambda_inverse, not both".into(),
                ))
            }
            (None, None) => {
                if self.tb.is_empty() {
                    Framing::Lambda(SymIntMatrix::identity(0))
                } else {
                    return Err(Error::InvalidPresentation(
                        "missing lambda or lambda_inverse".into(),
                    ));
                }
            }
        };
        SurgeryPresentation::new(
            framing,
            self.tb.clone(),
            self.rot.clone(),
            self.linking.clone(),
            self.knot_tb,
        )
    }

    pub fn from_json(text: &str) -> Result<SurgeryPresentation> {
        let doc: PresentationDocument =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        doc.to_presentation()
    }
}
