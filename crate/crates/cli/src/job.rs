//! Job documents and their conversion into library objects.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use quadlat::ff::FiniteField;
use quadlat::global::{GlobalLattice, Place};
use quadlat::localfield::{RatFunc, Step};
use quadlat::{BaseField, Elem, Field, Mat, QuadLattice, Scalar};

use crate::error::{CliError, Context};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Jordan,
    Embeds,
    FindEmbedding,
    Spinor,
    Transporter,
    Springer,
    NormPrinciple,
    GlobalEmbeds,
    Hilbert,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Jordan => "jordan",
            Self::Embeds => "embeds",
            Self::FindEmbedding => "find-embedding",
            Self::Spinor => "spinor",
            Self::Transporter => "transporter",
            Self::Springer => "springer",
            Self::NormPrinciple => "norm-principle",
            Self::GlobalEmbeds => "global-embeds",
            Self::Hilbert => "hilbert",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BaseSpec {
    Padic {
        p: u32,
    },
    /// `F_q((place))`; the place defaults to `t`.
    Laurent {
        q: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        place: Option<Vec<u64>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StepSpec {
    Unramified {
        degree: usize,
    },
    /// Monic Eisenstein polynomial, lowest coefficient first.
    Eisenstein {
        coeffs: Vec<ScalarSpec>,
    },
}

/// A base-field scalar: `"a/b"` or an integer over `Q_p`; a coefficient
/// array or `{num, den}` over `F_q(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarSpec {
    Int(i64),
    Str(String),
    Poly(Vec<u64>),
    Frac { num: Vec<u64>, den: Vec<u64> },
}

pub type MatrixSpec = Vec<Vec<ScalarSpec>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    pub base: BaseSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tower: Vec<StepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram_n: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub injection: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub places: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<ScalarSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<ScalarSpec>,
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "job document".to_string() } else { path };
            CliError::Malformed(format!("{field}: {}", e.inner()))
        })
    }

    pub fn require<'a, T>(&self, field: &str, value: &'a Option<T>) -> Result<&'a T, CliError> {
        value
            .as_ref()
            .ok_or_else(|| CliError::Malformed(format!("{field}: required by command {}", self.command.name())))
    }

    pub fn base_field(&self) -> Result<BaseField, CliError> {
        match &self.base {
            BaseSpec::Padic { p } => BaseField::padic(*p).context("base.p"),
            BaseSpec::Laurent { q, place } => {
                let fq = FiniteField::of_order(*q).context("base.q")?;
                match place {
                    None => BaseField::laurent(*q).context("base.q"),
                    Some(c) => BaseField::laurent_at(*q, poly(&fq, c, "base.place")?).context("base.place"),
                }
            }
        }
    }

    /// The base field extended by `tower`.
    pub fn tower_field(&self) -> Result<Field, CliError> {
        let base = self.base_field()?;
        let mut field = Field::new(base.clone());
        for (i, step) in self.tower.iter().enumerate() {
            let name = format!("tower[{i}]");
            let step = match step {
                StepSpec::Unramified { degree } => Step::Unramified { degree: *degree },
                StepSpec::Eisenstein { coeffs } => Step::Eisenstein {
                    coeffs: coeffs
                        .iter()
                        .map(|c| Ok(field.from_scalar(scalar(&base, c, &format!("{name}.coeffs"))?)))
                        .collect::<Result<_, CliError>>()?,
                },
            };
            field = field.push_step(step).context(&name)?;
        }
        Ok(field)
    }

    pub fn lattice(&self, field: &Field, name: &str, spec: &Option<MatrixSpec>) -> Result<QuadLattice, CliError> {
        let gram = matrix(field, self.require(name, spec)?, name)?;
        QuadLattice::new(field.clone(), gram).context(name)
    }

    pub fn matrix(&self, field: &Field, name: &str, spec: &Option<MatrixSpec>) -> Result<Mat, CliError> {
        matrix(field, self.require(name, spec)?, name)
    }

    pub fn element(&self, field: &Field, name: &str, spec: &Option<ScalarSpec>) -> Result<Elem, CliError> {
        Ok(field.from_scalar(scalar(field.base_field(), self.require(name, spec)?, name)?))
    }

    pub fn global_lattice(&self, name: &str, spec: &Option<MatrixSpec>) -> Result<GlobalLattice, CliError> {
        let BaseSpec::Laurent { q, .. } = self.base else {
            return Err(CliError::Malformed("base.kind: global jobs need a laurent base".into()));
        };
        let fq = FiniteField::of_order(q).context("base.q")?;
        let rows = self
            .require(name, spec)?
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, s)| ratfunc(&fq, s, &format!("{name}[{i}][{j}]")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        GlobalLattice::new(q, rows).context(name)
    }

    pub fn place_list(&self, fq: &FiniteField) -> Result<Option<Vec<Place>>, CliError> {
        self.places
            .as_ref()
            .map(|ps| {
                ps.iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let name = format!("places[{i}]");
                        Place::new(fq, poly(fq, c, &name)?).context(&name)
                    })
                    .collect()
            })
            .transpose()
    }
}

fn matrix(field: &Field, rows: &MatrixSpec, name: &str) -> Result<Mat, CliError> {
    let base = field.base_field();
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| Ok(field.from_scalar(scalar(base, s, &format!("{name}[{i}][{j}]"))?)))
                .collect::<Result<Vec<_>, CliError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Mat::from_rows(rows).context(name)
}

fn scalar(base: &BaseField, s: &ScalarSpec, name: &str) -> Result<Scalar, CliError> {
    match base.constants() {
        None => base.from_rational(rational(s, name)?).context(name),
        Some(fq) => Ok(Scalar::Fun(ratfunc(fq, s, name)?)),
    }
}

fn rational(s: &ScalarSpec, name: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Malformed(format!("{name}: expected a rational \"a/b\" with b > 0"));
    match s {
        ScalarSpec::Int(n) => Ok(BigRational::from_integer(BigInt::from(*n))),
        ScalarSpec::Str(t) => {
            let (num, den) = match t.split_once('/') {
                Some((a, b)) => (a, b),
                None => (t.as_str(), "1"),
            };
            if den.starts_with(['+', '-']) {
                return Err(bad());
            }
            let num = BigInt::from_str(num).map_err(|_| bad())?;
            let den = BigInt::from_str(den).map_err(|_| bad())?;
            if !den.is_positive() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        _ => Err(bad()),
    }
}

fn ratfunc(fq: &FiniteField, s: &ScalarSpec, name: &str) -> Result<RatFunc, CliError> {
    match s {
        ScalarSpec::Int(n) => Ok(RatFunc::constant(fq, fq.from_int(*n))),
        ScalarSpec::Poly(c) => Ok(RatFunc::from_poly(fq, poly(fq, c, name)?)),
        ScalarSpec::Frac { num, den } => {
            let num = poly(fq, num, &format!("{name}.num"))?;
            let den = poly(fq, den, &format!("{name}.den"))?;
            if den.iter().all(|c| fq.is_zero(c)) {
                return Err(CliError::Malformed(format!("{name}.den: zero denominator")));
            }
            RatFunc::new(fq, num, den).context(name)
        }
        ScalarSpec::Str(_) => Err(CliError::Malformed(format!(
            "{name}: expected a coefficient array or {{\"num\", \"den\"}} over F_{}",
            fq.size()
        ))),
    }
}

fn poly(fq: &FiniteField, c: &[u64], name: &str) -> Result<Vec<quadlat::ff::Residue>, CliError> {
    c.iter()
        .map(|&x| {
            if x >= fq.size() {
                Err(CliError::Malformed(format!("{name}: coefficient {x} is not in [0, {})", fq.size())))
            } else {
                Ok(fq.element(x))
            }
        })
        .collect()
}
