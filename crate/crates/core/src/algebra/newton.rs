//! Newton polygons with respect to the t-adic valuation.

use serde::Serialize;

use super::poly::UniPoly;
use super::rational::{format_rational, Rational};
use super::ring::{Ring, TValuation};

/// Roots sharing one t-adic valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootClass {
    pub valuation: Rational,
    pub multiplicity: usize,
}

/// Valuations of all roots of a polynomial, counted with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValuationProfile {
    /// Nonzero roots, by decreasing valuation.
    pub classes: Vec<RootClass>,
    /// Multiplicity of the root `0`.
    pub zero_roots: usize,
}

impl ValuationProfile {
    pub fn root_count(&self) -> usize {
        self.zero_roots + self.classes.iter().map(|c| c.multiplicity).sum::<usize>()
    }

    /// Number of roots (with multiplicity) that lie in the closed unit disk,
    /// that is, with nonnegative valuation. Zero roots count.
    pub fn in_closed_unit_disk(&self) -> usize {
        self.zero_roots
            + self
                .classes
                .iter()
                .filter(|c| c.valuation >= <Rational as Ring>::zero())
                .map(|c| c.multiplicity)
                .sum::<usize>()
    }
}

impl Serialize for RootClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RootClass", 2)?;
        st.serialize_field("valuation", &format_rational(&self.valuation))?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.end()
    }
}

impl Serialize for ValuationProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ValuationProfile", 2)?;
        st.serialize_field("classes", &self.classes)?;
        st.serialize_field("zeroRoots", &self.zero_roots)?;
        st.end()
    }
}

/// Root valuations read off the lower convex hull of `(i, v(c_i))`.
/// `None` for the zero polynomial.
pub fn newton_valuations<C: Ring + TValuation>(p: &UniPoly<C>) -> Option<ValuationProfile> {
    let trailing = p.trailing_degree()?;
    let pts: Vec<(i64, i64)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.t_valuation().map(|v| (i as i64, v)))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    // slopes increase along the lower hull, so valuations come out decreasing
    let classes: Vec<RootClass> = hull
        .windows(2)
        .map(|w| {
            let (dx, dv) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            RootClass {
                valuation: -Rational::new(dv.into(), dx.into()),
                multiplicity: dx as usize,
            }
        })
        .collect();
    Some(ValuationProfile {
        classes,
        zero_roots: trailing,
    })
}
