use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

/// Identity of an element of some input set.
///
/// Explicit sets use opaque integer ids; lattice-ball sets use the lattice
/// point itself. In JSON an id is a bare integer and a point is an array of
/// integers (coordinates too large for `i64` are written as decimal strings).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementId {
    Id(i64),
    Point(Vec<BigInt>),
}

impl ElementId {
    pub fn point<I, T>(coords: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        ElementId::Point(coords.into_iter().map(Into::into).collect())
    }

    pub fn as_point(&self) -> Option<&[BigInt]> {
        match self {
            ElementId::Point(p) => Some(p),
            ElementId::Id(_) => None,
        }
    }
}

impl From<i64> for ElementId {
    fn from(v: i64) -> Self {
        ElementId::Id(v)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementId::Id(v) => write!(f, "{v}"),
            ElementId::Point(p) => {
                write!(f, "(")?;
                for (i, c) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

struct Coord<'a>(&'a BigInt);

impl Serialize for Coord<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl Serialize for ElementId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ElementId::Id(v) => s.serialize_i64(*v),
            ElementId::Point(p) => {
                let mut seq = s.serialize_seq(Some(p.len()))?;
                for c in p {
                    seq.serialize_element(&Coord(c))?;
                }
                seq.end()
            }
        }
    }
}

struct CoordOwned(BigInt);

impl<'de> Deserialize<'de> for CoordOwned {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = CoordOwned;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<CoordOwned, E> {
                Ok(CoordOwned(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<CoordOwned, E> {
                Ok(CoordOwned(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<CoordOwned, E> {
                v.trim().parse().map(CoordOwned).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

impl<'de> Deserialize<'de> for ElementId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ElementId;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer id or an array of integer coordinates")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ElementId, E> {
                Ok(ElementId::Id(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ElementId, E> {
                i64::try_from(v)
                    .map(ElementId::Id)
                    .map_err(|_| E::custom("element id does not fit in 64 signed bits"))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<ElementId, A::Error> {
                let mut out = Vec::new();
                while let Some(CoordOwned(c)) = seq.next_element()? {
                    out.push(c);
                }
                Ok(ElementId::Point(out))
            }
        }
        d.deserialize_any(V)
    }
}
