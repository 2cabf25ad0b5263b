use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::functor::{DiagramFunctor, Functor};
use super::module::{CoeffAlgebra, RModule};
use crate::error::{Error, Result};
use crate::exactalg::{FpMatrix, IntMatrix, Ring};
use crate::fincat::FinCat;

/// `{"p": 2, "m": 2}` for `F_p[x]/(x^m)`, or `"Z"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficient {
    Integers,
    Algebra(CoeffAlgebra),
}

impl Serialize for Coefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Pm {
            p: u32,
            m: usize,
        }
        match self {
            Coefficient::Integers => s.serialize_str("Z"),
            Coefficient::Algebra(a) => Pm { p: a.p, m: a.m }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Name(String),
            Pm {
                p: u32,
                #[serde(default = "one")]
                m: usize,
            },
        }
        fn one() -> usize {
            1
        }
        match Raw::deserialize(d)? {
            Raw::Name(n) if n == "Z" => Ok(Coefficient::Integers),
            Raw::Name(n) => Err(serde::de::Error::custom(format!("unknown coefficient '{n}', expected \"Z\" or {{\"p\",\"m\"}}"))),
            Raw::Pm { p, m } => CoeffAlgebra::new(p, m)
                .map(Coefficient::Algebra)
                .map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleEntry {
    pub dim: usize,
    /// Action of `x`; zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<Vec<i64>>>,
}

/// The JSON form of a diagram. Matrices are row-major and act on column
/// vectors; identity morphisms may be omitted from `maps`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub coefficient: Coefficient,
    pub modules: BTreeMap<String, ModuleEntry>,
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<Vec<i64>>>,
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

/// Checks the shape of a row-major matrix; `[]` stands for any `0 × cols`.
fn shaped(rows: &[Vec<i64>], r: usize, c: usize, location: &str) -> Result<()> {
    if rows.len() != r {
        return Err(parse_error(location, format!("expected {r} rows, found {}", rows.len())));
    }
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != c) {
        return Err(parse_error(
            format!("{location}[{i}]"),
            format!("expected {c} entries, found {}", row.len()),
        ));
    }
    Ok(())
}

impl DiagramFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| parse_error(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram files serialize")
    }

    pub fn ring(&self) -> Ring {
        match self.coefficient {
            Coefficient::Integers => Ring::Integers,
            Coefficient::Algebra(a) => Ring::PrimeField(a.p),
        }
    }

    pub fn from_functor(functor: &DiagramFunctor) -> Self {
        let base = functor.base();
        let modules = (0..base.num_objects())
            .map(|c| {
                let m = functor.module(c);
                let x = (!m.x().is_zero()).then(|| m.x().to_i64_rows());
                (base.objects()[c].clone(), ModuleEntry { dim: m.dim(), x })
            })
            .collect();
        let maps = (0..base.num_morphisms())
            .filter(|&f| !base.is_identity(f))
            .map(|f| (base.morphism(f).name.clone(), functor.map(f).to_i64_rows()))
            .collect();
        DiagramFile {
            coefficient: Coefficient::Algebra(functor.alg()),
            modules,
            maps,
        }
    }

    pub fn from_int_functor(functor: &Functor<IntMatrix>) -> Result<Self> {
        let base = functor.category();
        let modules = (0..base.num_objects())
            .map(|c| (base.objects()[c].clone(), ModuleEntry { dim: functor.dim(c), x: None }))
            .collect();
        let maps = (0..base.num_morphisms())
            .filter(|&f| !base.is_identity(f))
            .map(|f| {
                let rows = functor.map(f).to_i64_rows().ok_or_else(|| {
                    Error::InvalidDiagram(format!("entries of '{}' exceed 64 bits", base.morphism(f).name))
                })?;
                Ok((base.morphism(f).name.clone(), rows))
            })
            .collect::<Result<_>>()?;
        Ok(DiagramFile {
            coefficient: Coefficient::Integers,
            modules,
            maps,
        })
    }

    fn check_names(&self, base: &FinCat) -> Result<()> {
        if let Some(name) = self.modules.keys().find(|n| base.object_index(n).is_none()) {
            return Err(parse_error(format!("modules.{name}"), "not an object of the category"));
        }
        if let Some(name) = self.maps.keys().find(|n| base.morphism_index(n).is_none()) {
            return Err(parse_error(format!("maps.{name}"), "not a morphism of the category"));
        }
        Ok(())
    }

    fn dims(&self, base: &FinCat) -> Result<Vec<usize>> {
        self.check_names(base)?;
        base.objects()
            .iter()
            .map(|o| {
                self.modules
                    .get(o)
                    .map(|m| m.dim)
                    .ok_or_else(|| parse_error(format!("modules.{o}"), "missing module"))
            })
            .collect()
    }

    /// Row-major entries of `F(f)`; identities default to the identity and
    /// maps touching a zero module to the zero matrix.
    fn map_rows(&self, base: &FinCat, dims: &[usize], f: usize) -> Result<Vec<Vec<i64>>> {
        let m = base.morphism(f);
        let (r, c) = (dims[m.cod], dims[m.dom]);
        let location = format!("maps.{}", m.name);
        match self.maps.get(&m.name) {
            Some(rows) => {
                shaped(rows, r, c, &location)?;
                Ok(rows.clone())
            }
            None if m.identity => Ok((0..r).map(|i| (0..c).map(|j| i64::from(i == j)).collect()).collect()),
            None if r == 0 || c == 0 => Ok(vec![vec![0; c]; r]),
            None => Err(parse_error(location, "missing map")),
        }
    }

    /// The diagram over `F_p[x]/(x^m)`. Functoriality is not checked here.
    pub fn to_diagram(&self, base: Arc<FinCat>) -> Result<DiagramFunctor> {
        let Coefficient::Algebra(alg) = self.coefficient else {
            return Err(parse_error("coefficient", "an F_p[x]/(x^m) coefficient is required here"));
        };
        let dims = self.dims(&base)?;
        let modules = base
            .objects()
            .iter()
            .zip(&dims)
            .map(|(o, &d)| {
                let entry = &self.modules[o];
                let location = format!("modules.{o}.x");
                let x = match &entry.x {
                    Some(rows) => {
                        shaped(rows, d, d, &location)?;
                        matrix(alg.p, rows, d, d)
                    }
                    None => FpMatrix::zeros(alg.p, d, d),
                };
                RModule::new(alg, x).map_err(|e| parse_error(location, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let maps = (0..base.num_morphisms())
            .map(|f| {
                let rows = self.map_rows(&base, &dims, f)?;
                Ok(matrix(alg.p, &rows, dims[base.cod(f)], dims[base.dom(f)]))
            })
            .collect::<Result<Vec<_>>>()?;
        DiagramFunctor::new(base, alg, modules, maps)
    }

    /// The underlying functor to abelian groups (`Z`) or `F_p`-spaces.
    pub fn to_functor_int(&self, base: Arc<FinCat>) -> Result<Functor<IntMatrix>> {
        if self.coefficient != Coefficient::Integers {
            return Err(parse_error("coefficient", "integer coefficients are required here"));
        }
        let dims = self.dims(&base)?;
        if let Some((name, _)) = self.modules.iter().find(|(_, m)| m.x.is_some()) {
            return Err(parse_error(format!("modules.{name}.x"), "x-actions are meaningless over Z"));
        }
        let maps = (0..base.num_morphisms())
            .map(|f| {
                let rows = self.map_rows(&base, &dims, f)?;
                let mut m = IntMatrix::zeros(dims[base.cod(f)], dims[base.dom(f)]);
                for (i, row) in rows.iter().enumerate() {
                    for (j, &v) in row.iter().enumerate() {
                        m.set(i, j, v.into());
                    }
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        Functor::new(base, Ring::Integers, dims, maps)
    }
}

fn matrix(p: u32, rows: &[Vec<i64>], r: usize, c: usize) -> FpMatrix {
    FpMatrix::from_fn(p, r, c, |i, j| rows[i][j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::examples::arrow;

    const ARROW_DIAGRAM: &str = r#"{
        "coefficient": {"p": 2, "m": 2},
        "modules": {"a": {"dim": 2, "x": [[0, 0], [1, 0]]}, "b": {"dim": 1}},
        "maps": {"f": [[1, 0]]}
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let base = Arc::new(arrow());
        let file = DiagramFile::parse(ARROW_DIAGRAM).unwrap();
        let f = file.to_diagram(base.clone()).unwrap();
        assert!(super::super::functor::check_functor(&f).is_valid());
        assert_eq!(f.module(0).dim(), 2);
        let again = DiagramFile::parse(&DiagramFile::from_functor(&f).to_json()).unwrap();
        assert_eq!(again, file);
        assert_eq!(again.to_diagram(base).unwrap(), f);
    }

    #[test]
    fn reports_the_offending_field() {
        let base = Arc::new(arrow());
        let bad = ARROW_DIAGRAM.replace("[[1, 0]]", "[[1, 0, 1]]");
        let err = DiagramFile::parse(&bad).unwrap().to_diagram(base.clone()).unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location == "maps.f[0]"), "{err}");
        let missing = ARROW_DIAGRAM.replace(r#""b": {"dim": 1}"#, r#""c": {"dim": 1}"#);
        let err = DiagramFile::parse(&missing).unwrap().to_diagram(base).unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location == "modules.c"), "{err}");
        let err = DiagramFile::parse("{\"coefficient\": \"Q\"}").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn integer_diagrams() {
        let base = Arc::new(arrow());
        let text = r#"{"coefficient": "Z", "modules": {"a": {"dim": 1}, "b": {"dim": 1}}, "maps": {"f": [[3]]}}"#;
        let file = DiagramFile::parse(text).unwrap();
        let f = file.to_functor_int(base.clone()).unwrap();
        assert!(f.check().is_valid());
        assert_eq!(DiagramFile::from_int_functor(&f).unwrap(), file);
        assert!(file.to_diagram(base).is_err());
    }
}
