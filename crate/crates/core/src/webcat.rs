//! Boundary-end skeletons of webs and the commutation exponents they determine.

use std::collections::{BTreeMap, HashMap};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::grading::DegreeVector;
use crate::qtorus::SkewForm;
use crate::surface::{DecoratedTriangulation, PointPermutation, Sign, VertexRole};
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WebError {
    #[error("webs {0} and {1} live on different polygons")]
    PolygonMismatch(String, String),
    #[error("web {name}: ranks at p{point} are not strictly increasing")]
    RanksNotIncreasing { name: String, point: usize },
    #[error("web {name}: end types do not match weight {weight}")]
    ParityMismatch { name: String, weight: u8 },
    #[error("web {name}: special point p{point} out of range")]
    PointOutOfRange { name: String, point: usize },
    #[error("malformed catalog: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct End {
    pub rank: i64,
    #[serde(rename = "type")]
    pub kind: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WebSkeleton {
    pub name: String,
    pub weight: Weight,
    /// Number of special points of the polygon the web is drawn on.
    pub polygon: usize,
    pub ends: BTreeMap<usize, Vec<End>>,
    pub symmetry: Option<String>,
}

impl WebSkeleton {
    pub fn validate(&self) -> Result<(), WebError> {
        for (&p, ends) in &self.ends {
            if p >= self.polygon {
                return Err(WebError::PointOutOfRange {
                    name: self.name.clone(),
                    point: p,
                });
            }
            if ends.windows(2).any(|w| w[0].rank >= w[1].rank) {
                return Err(WebError::RanksNotIncreasing {
                    name: self.name.clone(),
                    point: p,
                });
            }
        }
        let all_even = self
            .endpoint_degree()
            .pairs()
            .iter()
            .all(|[c1, c2]| (c1 + 2 * c2) % 2 == 0);
        if all_even != (self.weight == Weight::Two) {
            return Err(WebError::ParityMismatch {
                name: self.name.clone(),
                weight: self.weight.into(),
            });
        }
        Ok(())
    }

    /// Counts of ends by type at each special point.
    pub fn endpoint_degree(&self) -> DegreeVector {
        let mut pairs = vec![[0i64; 2]; self.polygon];
        for (&p, ends) in &self.ends {
            for e in ends {
                pairs[p][e.kind as usize - 1] += 1;
            }
        }
        DegreeVector::from_pairs(pairs)
    }

    /// Special points where `self` and `other` have ends on a common ray;
    /// such pairs contribute nothing to [`pi_of`].
    pub fn shared_rays(&self, other: &WebSkeleton) -> Vec<usize> {
        self.ends
            .iter()
            .filter(|(p, ends)| {
                other.ends.get(p).is_some_and(|theirs| {
                    ends.iter().any(|x| theirs.iter().any(|y| x.rank == y.rank))
                })
            })
            .map(|(p, _)| *p)
            .collect()
    }
}

pub fn pi_of(a: &WebSkeleton, b: &WebSkeleton) -> Result<i64, WebError> {
    if a.polygon != b.polygon {
        return Err(WebError::PolygonMismatch(a.name.clone(), b.name.clone()));
    }
    let mut total = 0;
    for (p, xs) in &a.ends {
        let Some(ys) = b.ends.get(p) else { continue };
        for x in xs {
            for y in ys {
                let w = if x.kind == Weight::Two && y.kind == Weight::Two {
                    2
                } else {
                    1
                };
                total += (x.rank - y.rank).signum() * w;
            }
        }
    }
    Ok(total)
}

pub fn pi_matrix(webs: &[WebSkeleton]) -> Result<SkewForm, WebError> {
    let rows = webs
        .iter()
        .map(|a| {
            webs.iter()
                .map(|b| pi_of(a, b))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SkewForm::from_rows(rows).expect("pi_of is antisymmetric"))
}

pub fn dt_on_skeleton(a: &WebSkeleton, perm: &PointPermutation) -> WebSkeleton {
    WebSkeleton {
        ends: a
            .ends
            .iter()
            .map(|(&p, e)| (perm.apply(p), e.clone()))
            .collect(),
        ..a.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub polygon: usize,
    pub webs: Vec<WebSkeleton>,
}

impl Catalog {
    pub fn pi_matrix(&self) -> Result<SkewForm, WebError> {
        pi_matrix(&self.webs)
    }

    pub fn get(&self, name: &str) -> Option<&WebSkeleton> {
        self.webs.iter().find(|w| w.name == name)
    }

    pub fn validate(&self) -> Result<(), WebError> {
        self.webs.iter().try_for_each(WebSkeleton::validate)
    }
}

#[derive(Serialize, Deserialize)]
struct WebJson {
    name: String,
    weight: Weight,
    ends: BTreeMap<String, Vec<End>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symmetry: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct CatalogJson {
    polygon: usize,
    webs: Vec<WebJson>,
}

fn point_key(p: usize) -> String {
    format!("p{p}")
}

fn parse_point(s: &str) -> Option<usize> {
    s.strip_prefix('p')?.parse().ok()
}

impl Serialize for Catalog {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CatalogJson {
            polygon: self.polygon,
            webs: self
                .webs
                .iter()
                .map(|w| WebJson {
                    name: w.name.clone(),
                    weight: w.weight,
                    ends: w
                        .ends
                        .iter()
                        .map(|(p, e)| (point_key(*p), e.clone()))
                        .collect(),
                    symmetry: w.symmetry.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Catalog {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let js = CatalogJson::deserialize(d)?;
        let webs = js
            .webs
            .into_iter()
            .map(|w| {
                let ends = w
                    .ends
                    .into_iter()
                    .map(|(k, e)| {
                        parse_point(&k)
                            .map(|p| (p, e))
                            .ok_or_else(|| D::Error::custom(format!("bad special point key {k:?}")))
                    })
                    .collect::<Result<BTreeMap<_, _>, _>>()?;
                Ok(WebSkeleton {
                    name: w.name,
                    weight: w.weight,
                    polygon: js.polygon,
                    ends,
                    symmetry: w.symmetry,
                })
            })
            .collect::<Result<Vec<_>, D::Error>>()?;
        Ok(Catalog {
            polygon: js.polygon,
            webs,
        })
    }
}

#[derive(Deserialize)]
struct RankFile {
    sector_width: i64,
    #[serde(rename = "+")]
    plus: HashMap<String, HashMap<String, Vec<End>>>,
    #[serde(rename = "-")]
    minus: HashMap<String, HashMap<String, Vec<End>>>,
}

const RANKS: &str = include_str!("../fixtures/web_ranks.json");

/// Bundled catalog holding the quarter-turn symmetric web of the square.
pub fn pinwheel() -> Catalog {
    serde_json::from_str(include_str!("../fixtures/pinwheel.json"))
        .expect("bundled pinwheel parses")
}

/// Face-web ends of a decorated triangle: `[weight-1 web, weight-2 web]`,
/// each a list of `(corner role 0..3, end)` with ranks local to the sector.
fn face_ends(sign: Sign) -> [Vec<(usize, End)>; 2] {
    let file: RankFile = serde_json::from_str(RANKS).expect("bundled rank fixture parses");
    assert_eq!(file.sector_width, 100, "rank fixture uses sector width 100");
    let table = match sign {
        Sign::Plus => &file.plus,
        Sign::Minus => &file.minus,
    };
    let pick = |w: &str| {
        let mut out = Vec::new();
        for (k, role) in ["lambda", "mu", "nu"].iter().enumerate() {
            for e in table[w].get(*role).map(Vec::as_slice).unwrap_or_default() {
                out.push((k, *e));
            }
        }
        out
    };
    [pick("1"), pick("2")]
}

/// Skeletons of the web cluster attached to `dt`, in seed order.
pub fn catalog_for(dt: &DecoratedTriangulation) -> Result<Catalog, WebError> {
    let layout = dt.layout();
    let np = dt.special_point_count();
    let width = dt.sector_width();
    let mut webs = Vec::with_capacity(layout.n());
    for (idx, role) in layout.roles.iter().enumerate() {
        let mut ends: BTreeMap<usize, Vec<End>> = BTreeMap::new();
        let weight = match *role {
            VertexRole::Face { triangle, weight } => {
                let tri = dt.triangle(triangle);
                let fe = face_ends(tri.sign);
                for &(k, e) in &fe[weight as usize - 1] {
                    let c = (tri.m + k) % 3;
                    ends.entry(dt.point(triangle, c)).or_default().push(End {
                        rank: dt.sector_offset(triangle, c) + e.rank,
                        kind: e.kind,
                    });
                }
                weight
            }
            VertexRole::Edge { edge, weight } => {
                let (t, s) = layout.edges[edge].sides[0];
                ends.entry(dt.point(t, s)).or_default().push(End {
                    rank: dt.sector_offset(t, s) + width,
                    kind: weight,
                });
                ends.entry(dt.point(t, s + 1)).or_default().push(End {
                    rank: dt.sector_offset(t, s + 1),
                    kind: weight,
                });
                weight
            }
        };
        for list in ends.values_mut() {
            list.sort();
        }
        webs.push(WebSkeleton {
            name: format!("e{}", idx + 1),
            weight,
            polygon: np,
            ends,
            symmetry: None,
        });
    }
    let cat = Catalog { polygon: np, webs };
    cat.validate()?;
    Ok(cat)
}
