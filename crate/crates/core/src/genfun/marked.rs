use std::collections::BTreeMap;

use crate::pseries::{Coefficient, TruncatedSeries};

/// Polynomial in the markers `t_k`, one per tracked multiplicity, with
/// truncated series coefficients.
///
/// Exponent vectors are indexed like `markers`; terms beyond a marker's
/// degree bound are dropped, so products never grow past the bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedSeries<C: Coefficient> {
    markers: Vec<usize>,
    bounds: Vec<usize>,
    order: usize,
    terms: BTreeMap<Vec<usize>, TruncatedSeries<C>>,
}

impl<C: Coefficient> MarkedSeries<C> {
    pub fn new(markers: Vec<usize>, bounds: Vec<usize>, order: usize) -> Self {
        assert_eq!(markers.len(), bounds.len());
        Self {
            markers,
            bounds,
            order,
            terms: BTreeMap::new(),
        }
    }

    /// Same markers and bounds, no terms.
    pub fn empty_like(&self) -> Self {
        Self::new(self.markers.clone(), self.bounds.clone(), self.order)
    }

    pub fn markers(&self) -> &[usize] {
        &self.markers
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &TruncatedSeries<C>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `prod t^exp`, zero if absent.
    pub fn coefficient(&self, exp: &[usize]) -> TruncatedSeries<C> {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(|| TruncatedSeries::zero(self.order))
    }

    fn within_bounds(&self, exp: &[usize]) -> bool {
        exp.iter().zip(&self.bounds).all(|(e, b)| e <= b)
    }

    /// Add `s prod t^exp`.
    pub fn add_term(&mut self, exp: Vec<usize>, s: &TruncatedSeries<C>) {
        if s.is_zero() || !self.within_bounds(&exp) {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(t) => {
                *t += s;
                if t.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, s.project(self.order));
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (e, s) in &other.terms {
            self.add_term(e.clone(), s);
        }
    }

    /// Multiply by `t_{markers[index]}`.
    pub fn times_marker(&self, index: usize) -> Self {
        let mut out = self.empty_like();
        for (e, s) in &self.terms {
            let mut e = e.clone();
            e[index] += 1;
            out.add_term(e, s);
        }
        out
    }

    pub fn mul_series(&self, s: &TruncatedSeries<C>) -> Self {
        let mut out = self.empty_like();
        if s.is_zero() {
            return out;
        }
        let sv = s.valuation().unwrap_or(0);
        for (e, t) in &self.terms {
            if t.valuation().unwrap_or(0) + sv > self.order {
                continue;
            }
            out.add_term(e.clone(), &(t * s));
        }
        out
    }

    pub fn z_d_dz(&self) -> Self {
        let mut out = self.empty_like();
        for (e, s) in &self.terms {
            out.add_term(e.clone(), &s.z_d_dz());
        }
        out
    }

    /// Coefficient of `z^m` of every term.
    pub fn z_coefficients(&self, m: usize) -> BTreeMap<Vec<usize>, C> {
        self.terms
            .iter()
            .filter_map(|(e, s)| s.get(m).map(|c| (e.clone(), c.clone())))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}
