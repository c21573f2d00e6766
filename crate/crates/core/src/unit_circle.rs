use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::defaults::UNIT_MODULUS_TOL;
use crate::error::{Error, Result};

/// Declared arithmetic of the multiplier's argument.
///
/// Whether `arg(c)/pi` is rational decides the whole theory (rational
/// arguments reduce to plain or anti-periodicity through a finite power;
/// irrational arguments make the orbit `{c^l}` dense in the circle), and
/// that dichotomy is undecidable in floating point. The caller declares it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArgKind {
    /// `arg(c) = pi * p / q` with `gcd(|p|, q) = 1`; `p = 0` encodes `c = 1`.
    Rational { p: i64, q: u64 },
    /// `arg(c) = pi * phi` with `phi` declared irrational by the caller.
    Irrational { phi: f64 },
}

/// A multiplier `c` on the unit circle together with its declared argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitComplex {
    value: Complex64,
    arg_kind: ArgKind,
}

/// Largest accepted denominator: keeps exponent arithmetic (`p * m mod 2q`)
/// inside i64 and the angle `pi p / q` meaningful in f64.
const MAX_DENOMINATOR: u64 = 1_000_000_000;

/// Reduce `p/q` (argument in units of pi) to lowest terms with `p` in `(-q, q]`.
fn normalize_rational(p: i64, q: u64) -> Result<(i64, u64)> {
    if q == 0 || q > MAX_DENOMINATOR {
        return Err(Error::InvalidParam(format!(
            "rational argument requires 1 <= q <= {MAX_DENOMINATOR}"
        )));
    }
    let q_i = q as i64;
    // Angle is defined mod 2*pi, i.e. p mod 2q.
    let mut r = p.rem_euclid(2 * q_i);
    if r > q_i {
        r -= 2 * q_i; // into (-q, q]
    }
    if r == 0 {
        return Ok((0, 1));
    }
    let g = gcd(r.unsigned_abs(), q);
    Ok((r / g as i64, q / g))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl UnitComplex {
    /// Build from an explicit value and declared argument, validating both
    /// the unit modulus and the agreement between value and declaration.
    pub fn new(value: Complex64, arg_kind: ArgKind) -> Result<Self> {
        let modulus = value.norm();
        if (modulus - 1.0).abs() > UNIT_MODULUS_TOL {
            return Err(Error::InvalidMultiplier { modulus });
        }
        let declared = match arg_kind {
            ArgKind::Rational { p, q } => {
                let (p, q) = normalize_rational(p, q)?;
                Complex64::cis(std::f64::consts::PI * p as f64 / q as f64)
            }
            ArgKind::Irrational { phi } => Complex64::cis(std::f64::consts::PI * phi),
        };
        let deviation = (value - declared).norm();
        if deviation > UNIT_MODULUS_TOL {
            return Err(Error::ArgMismatch { deviation });
        }
        let arg_kind = match arg_kind {
            ArgKind::Rational { p, q } => {
                let (p, q) = normalize_rational(p, q)?;
                ArgKind::Rational { p, q }
            }
            other => other,
        };
        Ok(UnitComplex { value, arg_kind })
    }

    /// Build without validation. Exists so raw inputs can be round-tripped
    /// verbatim; every measuring operation re-checks the modulus and
    /// rejects off-circle multipliers.
    pub fn new_unchecked(value: Complex64, arg_kind: ArgKind) -> Self {
        UnitComplex { value, arg_kind }
    }

    /// `c = e^{i pi p / q}`.
    pub fn from_rational(p: i64, q: u64) -> Result<Self> {
        let (p, q) = normalize_rational(p, q)?;
        let value = Complex64::cis(std::f64::consts::PI * p as f64 / q as f64);
        Ok(UnitComplex {
            value,
            arg_kind: ArgKind::Rational { p, q },
        })
    }

    /// `c = e^{i pi phi}` with `phi` declared irrational by the caller.
    pub fn from_phi(phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::InvalidParam("phi must be finite".into()));
        }
        Ok(UnitComplex {
            value: Complex64::cis(std::f64::consts::PI * phi),
            arg_kind: ArgKind::Irrational { phi },
        })
    }

    /// `c = e^{i theta}` for an angle in radians, declared irrational.
    pub fn from_angle(theta: f64) -> Result<Self> {
        Self::from_phi(theta / std::f64::consts::PI)
    }

    pub fn one() -> Self {
        UnitComplex {
            value: Complex64::new(1.0, 0.0),
            arg_kind: ArgKind::Rational { p: 0, q: 1 },
        }
    }

    pub fn minus_one() -> Self {
        UnitComplex {
            value: Complex64::new(-1.0, 0.0),
            arg_kind: ArgKind::Rational { p: 1, q: 1 },
        }
    }

    pub fn i() -> Self {
        UnitComplex {
            value: Complex64::new(0.0, 1.0),
            arg_kind: ArgKind::Rational { p: 1, q: 2 },
        }
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn arg_kind(&self) -> ArgKind {
        self.arg_kind
    }

    /// Re-check the unit-modulus invariant. Called by every operation that
    /// consumes a multiplier, so unchecked values cannot slip through.
    pub fn ensure_unit(&self) -> Result<()> {
        let modulus = self.value.norm();
        if (modulus - 1.0).abs() > UNIT_MODULUS_TOL {
            return Err(Error::InvalidMultiplier { modulus });
        }
        Ok(())
    }

    /// `c^m` with the argument tracked exactly (rational) or reduced mod 2
    /// (irrational). Angle arithmetic avoids the drift of repeated complex
    /// multiplication.
    pub fn pow(&self, m: i64) -> Self {
        match self.arg_kind {
            ArgKind::Rational { p, q } => {
                // c^{2q} = 1, so reduce the exponent first; the product
                // p * m_red then fits comfortably in i64.
                let m_red = m.rem_euclid(2 * q as i64);
                let (p2, q2) = normalize_rational(p * m_red, q).expect("q >= 1 by construction");
                UnitComplex {
                    value: Complex64::cis(std::f64::consts::PI * p2 as f64 / q2 as f64),
                    arg_kind: ArgKind::Rational { p: p2, q: q2 },
                }
            }
            ArgKind::Irrational { phi } => {
                let phi_m = (phi * m as f64).rem_euclid(2.0);
                UnitComplex {
                    value: Complex64::cis(std::f64::consts::PI * phi_m),
                    arg_kind: ArgKind::Irrational { phi: phi_m },
                }
            }
        }
    }

    /// `1/c = conj(c)` on the unit circle.
    pub fn recip(&self) -> Self {
        let arg_kind = match self.arg_kind {
            ArgKind::Rational { p, q } => {
                let (p2, q2) = normalize_rational(-p, q).expect("q >= 1 by construction");
                ArgKind::Rational { p: p2, q: q2 }
            }
            ArgKind::Irrational { phi } => ArgKind::Irrational {
                phi: (-phi).rem_euclid(2.0),
            },
        };
        UnitComplex {
            value: self.value.conj(),
            arg_kind,
        }
    }
}

/// Wire form: `{re, im, arg_kind}`. Deserialization validates.
#[derive(Serialize, Deserialize)]
struct UnitComplexRepr {
    re: f64,
    im: f64,
    arg_kind: ArgKind,
}

impl Serialize for UnitComplex {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        UnitComplexRepr {
            re: self.value.re,
            im: self.value.im,
            arg_kind: self.arg_kind,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UnitComplex {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let repr = UnitComplexRepr::deserialize(deserializer)?;
        UnitComplex::new(Complex64::new(repr.re, repr.im), repr.arg_kind)
            .map_err(serde::de::Error::custom)
    }
}
