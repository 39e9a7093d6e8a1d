//! Instance files.
//!
//! ```json
//! {"sets": [{"kind": "explicit", "elements": [1, 2, [3, 4]]},
//!           {"kind": "ball", "dim": 2, "radius": 2, "lambda": "1/3", "l": 1, "center": [[0, 1], [2, 0]]},
//!           {"kind": "ball-free", "center": [0.5, -1.25], "radius": 40}],
//!  "bias": {"alpha_l": 0.1, "alpha_r": 0.1, "beta_l": 0.1, "beta_r": 0.1},
//!  "seed": 7}
//! ```
//!
//! Radii and free-center coordinates are read as exact decimals, so `2.1`
//! means `21/10` rather than the nearest double.

use std::path::Path;
use std::sync::Arc;

use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ball_union::{ball_oracle, BallShape, Branch};
use crate::element::ElementId;
use crate::error::{Error, Result};
use crate::lattice::{parse_rational, BallSpec, FreeBall, Lambda, StructuredCoord};
use crate::oracle::{BiasSpec, ExplicitSet, OracleList, SetOracle};
use crate::rng::SeedTree;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SetEntry {
    Explicit {
        elements: Vec<ElementId>,
    },
    Ball {
        dim: usize,
        radius: Value,
        #[serde(default = "default_lambda")]
        lambda: String,
        #[serde(default)]
        l: u64,
        center: Vec<(Value, i64)>,
    },
    BallFree {
        center: Vec<Value>,
        radius: Value,
    },
}

fn default_lambda() -> String {
    "0".into()
}

fn exact_number(v: &Value, name: &'static str) -> Result<BigRational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(Error::invalid(name, format!("expected a number, got {other}"))),
    }
}

impl SetEntry {
    pub fn is_ball(&self) -> bool {
        !matches!(self, SetEntry::Explicit { .. })
    }

    pub fn to_shape(&self) -> Result<Option<BallShape>> {
        match self {
            SetEntry::Explicit { .. } => Ok(None),
            SetEntry::Ball {
                dim,
                radius,
                lambda,
                l,
                center,
            } => {
                if center.len() != *dim {
                    return Err(Error::Instance(format!(
                        "ball has dim {dim} but {} center coordinates",
                        center.len()
                    )));
                }
                let r = exact_number(radius, "radius")?;
                let center = center
                    .iter()
                    .map(|(i, j)| {
                        let i = exact_number(i, "center")?;
                        if !i.is_integer() {
                            return Err(Error::invalid("center", format!("integer part {i} is not an integer")));
                        }
                        Ok(StructuredCoord::new(i.to_integer(), *j))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Some(BallShape::Structured(BallSpec::new(
                    &r * &r,
                    Lambda::parse(lambda)?,
                    *l,
                    center,
                )?)))
            }
            SetEntry::BallFree { center, radius } => {
                let center = center
                    .iter()
                    .map(|c| exact_number(c, "center"))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Some(BallShape::Free(FreeBall::new(center, exact_number(radius, "radius")?)?)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub sets: Vec<SetEntry>,
    #[serde(default)]
    pub bias: BiasSpec,
    #[serde(default)]
    pub seed: u64,
}

/// Oracle list built from an instance, with the ball branches taken.
pub struct LoadedList {
    pub list: OracleList,
    /// `None` for explicit sets.
    pub branches: Vec<Option<Branch>>,
}

impl Instance {
    pub fn from_json(s: &str) -> Result<Self> {
        let inst: Instance = serde_json::from_str(s).map_err(|e| Error::Instance(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sets.len() < 2 {
            return Err(Error::Instance(format!("need at least 2 sets, got {}", self.sets.len())));
        }
        self.bias.validate()?;
        for (i, s) in self.sets.iter().enumerate() {
            if let SetEntry::Explicit { elements } = s {
                if elements.is_empty() {
                    return Err(Error::Instance(format!("set {i} is empty")));
                }
            }
        }
        Ok(())
    }

    /// Random explicit instance: `m` sets over `0..universe`, each of a
    /// uniform size in `[1, max_set]`. With `clustered`, every set is drawn
    /// from the first quarter of the universe so elements are thick.
    pub fn synthetic(m: usize, universe: usize, max_set: usize, clustered: bool, seed: u64) -> Result<Self> {
        if m < 2 || universe == 0 || max_set == 0 {
            return Err(Error::invalid("m", "need m >= 2 and a non-empty universe"));
        }
        let mut rng = SeedTree::new(seed).child("synthetic").rng();
        let width = if clustered { (universe / 4).max(1) } else { universe };
        let sets = (0..m)
            .map(|_| {
                let size = rng.gen_range(1..=width.min(max_set));
                let elements = rand::seq::index::sample(&mut rng, width, size)
                    .into_iter()
                    .map(|x| ElementId::Id(x as i64))
                    .collect();
                SetEntry::Explicit { elements }
            })
            .collect();
        Ok(Instance {
            sets,
            bias: BiasSpec::ZERO,
            seed,
        })
    }

    /// Element lists, when every set is explicit.
    pub fn explicit_sets(&self) -> Option<Vec<Vec<ElementId>>> {
        self.sets
            .iter()
            .map(|s| match s {
                SetEntry::Explicit { elements } => Some(elements.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn ball_shapes(&self) -> Result<Vec<BallShape>> {
        self.sets
            .iter()
            .map(|s| s.to_shape()?.ok_or_else(|| Error::Instance("expected only ball sets".into())))
            .collect()
    }

    /// Explicit sets take the instance bias; balls take the bias of their
    /// branch under `alpha`, `beta`. The list declares the worst of them.
    pub fn oracle_list(&self, alpha: f64, beta: f64, seeds: &SeedTree) -> Result<LoadedList> {
        let mut oracles: Vec<Arc<dyn SetOracle>> = Vec::with_capacity(self.sets.len());
        let mut branches = Vec::with_capacity(self.sets.len());
        let mut bias = BiasSpec::ZERO;
        for (i, s) in self.sets.iter().enumerate() {
            match s.to_shape()? {
                None => {
                    let SetEntry::Explicit { elements } = s else { unreachable!() };
                    let o = ExplicitSet::biased(elements.clone(), self.bias, seeds.child_indexed("set", i as u64))?;
                    bias = bias.max(&self.bias);
                    oracles.push(Arc::new(o));
                    branches.push(None);
                }
                Some(shape) => {
                    let o = ball_oracle(shape, alpha, beta)?;
                    bias = bias.max(&o.bias());
                    branches.push(Some(o.branch()));
                    oracles.push(Arc::new(o));
                }
            }
        }
        Ok(LoadedList {
            list: OracleList::new(oracles, bias)?,
            branches,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_instance() {
        let inst = Instance::from_json(
            r#"{"sets":[{"kind":"explicit","elements":[1,2,3]},{"kind":"explicit","elements":[[1,2],[3,4]]}],"seed":9}"#,
        )
        .unwrap();
        assert_eq!(inst.seed, 9);
        assert!(inst.bias.is_zero());
        let sets = inst.explicit_sets().unwrap();
        assert_eq!(sets[1][0], ElementId::point([1i64, 2]));
        let l = inst.oracle_list(0.2, 0.2, &SeedTree::new(0)).unwrap();
        assert_eq!(l.list.total_size(), 5.0);
    }

    #[test]
    fn ball_instance() {
        let inst = Instance::from_json(
            r#"{"sets":[
                {"kind":"ball","dim":2,"radius":2,"lambda":"0/1","l":0,"center":[[0,0],[0,0]]},
                {"kind":"ball","dim":2,"radius":"2.5","lambda":"1/3","l":1,"center":[[1,1],[0,-1]]},
                {"kind":"ball-free","center":[0.5,-1.25],"radius":40}
            ]}"#,
        )
        .unwrap();
        let shapes = inst.ball_shapes().unwrap();
        assert_eq!(shapes.len(), 3);
        assert_eq!(shapes[1].radius_sq(), parse_rational("6.25").unwrap());
        let l = inst.oracle_list(0.2, 0.2, &SeedTree::new(0)).unwrap();
        assert_eq!(l.list.oracle(0).approx_size(), 13.0);
        assert_eq!(l.branches[2], Some(Branch::Rejection));
        assert!(l.list.bias().alpha_l > 0.2);
    }

    #[test]
    fn synthetic_is_seeded() {
        let a = Instance::synthetic(10, 500, 40, true, 3).unwrap();
        assert_eq!(a, Instance::synthetic(10, 500, 40, true, 3).unwrap());
        assert_ne!(a, Instance::synthetic(10, 500, 40, true, 4).unwrap());
        assert!(a.explicit_sets().unwrap().iter().flatten().all(|x| matches!(x, ElementId::Id(i) if *i < 125)));
    }

    #[test]
    fn malformed_instances() {
        assert!(Instance::from_json(r#"{"sets":[{"kind":"explicit","elements":[1]}]}"#).is_err());
        assert!(Instance::from_json(r#"{"sets":[{"kind":"explicit","elements":[]},{"kind":"explicit","elements":[1]}]}"#).is_err());
        assert!(Instance::from_json(r#"{"sets":[{"kind":"cube"},{"kind":"explicit","elements":[1]}]}"#).is_err());
        let bad = Instance::from_json(
            r#"{"sets":[{"kind":"ball","dim":3,"radius":2,"center":[[0,0]]},{"kind":"explicit","elements":[1]}]}"#,
        )
        .unwrap();
        assert!(bad.sets[0].to_shape().is_err());
    }
}
