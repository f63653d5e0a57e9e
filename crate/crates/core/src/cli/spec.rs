//! The JSON input document: a group, a lattice, and optionally a second
//! lattice with a map into it.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::catalog;
use crate::error::Error;
use crate::group::FiniteGroup;
use crate::lattice::{GLattice, LatticeMap};
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub group: GroupSpec,
    pub lattice: LatticeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<LatticeSpec>,
    /// Matrix of a map `lattice -> target`, rows indexed by the target basis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<Vec<i64>>>,
}

/// Either `degree` with `permutations`, or `table` with `identity` and
/// `generators` (element indices).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutations: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
}

/// One row-major matrix per group generator, in generator order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub rank: usize,
    pub action: Vec<Vec<Vec<i64>>>,
}

/// A parsed and validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub group: Arc<FiniteGroup>,
    pub lattice: GLattice,
    pub target: Option<GLattice>,
    pub map: Option<LatticeMap>,
}

fn matrix(
    location: &str,
    rows: &[Vec<i64>],
    nrows: usize,
    ncols: usize,
) -> Result<IntMatrix, CliError> {
    if rows.len() != nrows {
        return Err(CliError::validation(format!(
            "{location}: expected {nrows} rows, found {}",
            rows.len()
        )));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != ncols {
            return Err(CliError::validation(format!(
                "{location}[{i}]: expected {ncols} entries, found {}",
                r.len()
            )));
        }
    }
    IntMatrix::from_rows(ncols, rows).map_err(|e| CliError::validation(format!("{location}: {e}")))
}

impl GroupSpec {
    pub fn build(&self) -> Result<Arc<FiniteGroup>, CliError> {
        let group = match (&self.permutations, &self.table) {
            (Some(perms), None) => {
                if self.identity.is_some() || self.generators.is_some() {
                    return Err(CliError::validation(
                        "group: `identity` and `generators` belong to the table form".into(),
                    ));
                }
                let degree = self.degree.ok_or_else(|| {
                    CliError::validation("group: `degree` is required with `permutations`".into())
                })?;
                FiniteGroup::from_permutations(degree, perms)
            }
            (None, Some(table)) => {
                if self.degree.is_some() {
                    return Err(CliError::validation(
                        "group: `degree` belongs to the permutation form".into(),
                    ));
                }
                let identity = self.identity.ok_or_else(|| {
                    CliError::validation("group: `identity` is required with `table`".into())
                })?;
                let generators = self.generators.clone().ok_or_else(|| {
                    CliError::validation("group: `generators` is required with `table`".into())
                })?;
                FiniteGroup::from_table(table.clone(), identity, generators)
            }
            _ => {
                return Err(CliError::validation(
                    "group: give exactly one of `permutations` (with `degree`) or `table`".into(),
                ))
            }
        };
        group
            .map(Arc::new)
            .map_err(|e| CliError::from_error("group", &e))
    }
}

impl LatticeSpec {
    pub fn build(&self, location: &str, group: &Arc<FiniteGroup>) -> Result<GLattice, CliError> {
        let k = group.generators().len();
        if self.action.len() != k {
            return Err(CliError::validation(format!(
                "{location}.action: expected {k} matrices (one per generator), found {}",
                self.action.len()
            )));
        }
        let images = self
            .action
            .iter()
            .enumerate()
            .map(|(i, m)| matrix(&format!("{location}.action[{i}]"), m, self.rank, self.rank))
            .collect::<Result<Vec<_>, _>>()?;
        GLattice::from_generator_images(group.clone(), self.rank, &images)
            .map_err(|e| CliError::from_error(location, &e))
    }

    pub fn from_lattice(m: &GLattice) -> Result<Self, Error> {
        let action = m
            .group()
            .generators()
            .iter()
            .map(|&g| matrix_rows(m.action(g)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LatticeSpec {
            rank: m.rank(),
            action,
        })
    }
}

pub(crate) fn matrix_rows(m: &IntMatrix) -> Result<Vec<Vec<i64>>, Error> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x: &BigInt| {
                    x.to_i64()
                        .ok_or_else(|| Error::Internal("entry exceeds 64 bits".into()))
                })
                .collect()
        })
        .collect()
}

impl ProblemSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::validation(format!("input: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn build(&self) -> Result<Problem, CliError> {
        let group = self.group.build()?;
        let lattice = self.lattice.build("lattice", &group)?;
        let target = match &self.target {
            Some(t) => Some(t.build("target", &group)?),
            None => None,
        };
        let map = match (&self.map, &target) {
            (Some(rows), Some(t)) => {
                let m = matrix("map", rows, t.rank(), lattice.rank())?;
                Some(
                    LatticeMap::new(lattice.clone(), t.clone(), m)
                        .map_err(|e| CliError::from_error("map", &e))?,
                )
            }
            (Some(_), None) => {
                return Err(CliError::validation(
                    "map: a `target` lattice is required".into(),
                ))
            }
            (None, _) => None,
        };
        Ok(Problem {
            group,
            lattice,
            target,
            map,
        })
    }

    /// A document describing `m`, and optionally a map into `target`.
    pub fn from_lattices(
        description: &str,
        m: &GLattice,
        target: Option<(&GLattice, &IntMatrix)>,
    ) -> Result<Self, Error> {
        let g = m.group();
        let group = match g.permutation_representation() {
            Some((degree, perms)) => GroupSpec {
                degree: Some(degree),
                permutations: Some(g.generators().iter().map(|&x| perms[x].clone()).collect()),
                ..GroupSpec::default()
            },
            None => GroupSpec {
                table: Some(
                    g.elements()
                        .map(|a| g.elements().map(|b| g.mul(a, b)).collect())
                        .collect(),
                ),
                identity: Some(g.identity()),
                generators: Some(g.generators().to_vec()),
                ..GroupSpec::default()
            },
        };
        let (target, map) = match target {
            Some((t, map)) => (Some(LatticeSpec::from_lattice(t)?), Some(matrix_rows(map)?)),
            None => (None, None),
        };
        Ok(ProblemSpec {
            description: Some(description.to_string()),
            group,
            lattice: LatticeSpec::from_lattice(m)?,
            target,
            map,
        })
    }
}

pub const EXTENSION_NAMES: [&str; 2] = ["extension-sign-C2", "extension-split-C2"];

/// Every name accepted by [`catalog`].
pub fn catalog_names() -> Vec<String> {
    let mut names: Vec<String> = catalog::LATTICE_NAMES
        .iter()
        .map(|s| s.to_string())
        .collect();
    names.extend(catalog::presentation_names());
    names.extend(EXTENSION_NAMES.iter().map(|s| s.to_string()));
    names
}

/// A ready-to-use input document for a catalog entry.
pub fn catalog(name: &str) -> Result<ProblemSpec, Error> {
    if name.starts_with("presentation-") {
        let p = catalog::presentation(name)?;
        let description =
            format!("surjection from a permutation lattice onto a character lattice ({name})");
        return ProblemSpec::from_lattices(
            &description,
            &p.permutation,
            Some((&p.target, p.surjection.matrix())),
        );
    }
    match name {
        "extension-sign-C2" => {
            let g = catalog::group("C2")?;
            let reg = GLattice::regular(g.clone());
            let z = GLattice::trivial(g, 1);
            ProblemSpec::from_lattices(
                "augmentation Z[C2] -> Z, with kernel the sign lattice",
                &reg,
                Some((&z, &IntMatrix::from_i64(1, 2, &[1, 1]))),
            )
        }
        "extension-split-C2" => {
            let sum = catalog::lattice("sign-plus-regular-C2")?;
            let g = catalog::group("C2")?;
            let reg = GLattice::regular(g);
            ProblemSpec::from_lattices(
                "projection sign + Z[C2] -> Z[C2]",
                &sum,
                Some((&reg, &IntMatrix::from_i64(2, 3, &[0, 1, 0, 0, 0, 1]))),
            )
        }
        _ => {
            let m = catalog::lattice(name).map_err(|_| {
                Error::InvalidGroup(format!(
                    "unknown catalog entry {name}; available: {}",
                    catalog_names().join(", ")
                ))
            })?;
            ProblemSpec::from_lattices(name, &m, None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_round_trip() {
        for name in catalog_names() {
            let spec = catalog(&name).unwrap();
            let again = ProblemSpec::parse(&spec.to_json()).unwrap();
            assert_eq!(spec, again, "{name}");
            let built = again.build().unwrap();
            if let Ok(m) = catalog::lattice(&name) {
                assert_eq!(built.lattice, m, "{name}");
            }
        }
    }

    #[test]
    fn validation_messages_name_the_location() {
        let mut spec = catalog("sign-C2").unwrap();
        spec.lattice.action[0][0][0] = 2;
        let err = spec.build().unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.message.starts_with("lattice"));

        let mut spec = catalog("sign-C2").unwrap();
        spec.lattice.action[0].push(vec![0]);
        let err = spec.build().unwrap_err();
        assert_eq!(err.code, 1);
        assert!(err.message.contains("lattice.action[0]"), "{}", err.message);

        let err = ProblemSpec::parse("{\"group\": {}").unwrap_err();
        assert_eq!(err.code, 1);
        assert!(err.message.contains("line 1"));
    }

    #[test]
    fn table_groups_are_accepted() {
        let text = r#"{
            "group": {"table": [[0, 1], [1, 0]], "identity": 0, "generators": [1]},
            "lattice": {"rank": 1, "action": [[[-1]]]}
        }"#;
        let problem = ProblemSpec::parse(text).unwrap().build().unwrap();
        assert_eq!(problem.lattice, catalog::lattice("sign-C2").unwrap());
    }

    #[test]
    fn non_equivariant_map_is_a_precondition_error() {
        let mut spec = catalog("extension-sign-C2").unwrap();
        spec.map = Some(vec![vec![1, 0]]);
        assert_eq!(spec.build().unwrap_err().code, 2);
    }
}
