//! Reward distributions on a bounded interval: finitely many atoms plus linear-density segments.
//!
//! Everything the rest of the crate needs (moments, CDFs with left limits, tail integrals,
//! superquantiles) is closed-form on this family. Mixtures are flattened at construction so
//! that segments never overlap and atoms only sit on segment boundaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MASS_TOL: f64 = 1e-9;

/// A linear density on `[lo, hi]` going from `f_lo` to `f_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Segment {
    fn slope(&self) -> f64 {
        (self.f_hi - self.f_lo) / (self.hi - self.lo)
    }

    pub fn density(&self, x: f64) -> f64 {
        if x >= self.hi {
            self.f_hi
        } else if x <= self.lo {
            self.f_lo
        } else {
            self.f_lo + self.slope() * (x - self.lo)
        }
    }

    pub fn mass(&self) -> f64 {
        0.5 * (self.f_lo + self.f_hi) * (self.hi - self.lo)
    }

    /// Mass on `[a, b]`, clipped to the segment.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        let a = a.max(self.lo);
        let b = b.min(self.hi);
        if b <= a {
            return 0.0;
        }
        let fa = self.density(a);
        let l = b - a;
        l * (fa + 0.5 * self.slope() * l)
    }

    /// `∫ x f(x) dx` over `[a, b]`, clipped to the segment.
    pub fn value_between(&self, a: f64, b: f64) -> f64 {
        let a = a.max(self.lo);
        let b = b.min(self.hi);
        if b <= a {
            return 0.0;
        }
        let fa = self.density(a);
        let s = self.slope();
        let l = b - a;
        l * (a * fa + l * (0.5 * (a * s + fa) + l * s / 3.0))
    }

    /// Offset `u` from `lo` with `mass_between(lo, lo + u) = r`.
    fn offset_for_mass_from_lo(&self, r: f64) -> f64 {
        let w = self.hi - self.lo;
        let s = self.slope();
        let disc = (self.f_lo * self.f_lo + 2.0 * s * r).max(0.0);
        let den = self.f_lo + disc.sqrt();
        let u = if den > 0.0 { 2.0 * r / den } else { 0.0 };
        u.clamp(0.0, w)
    }

    /// Offset `u` below `hi` with `mass_between(hi - u, hi) = r`.
    fn offset_for_mass_from_hi(&self, r: f64) -> f64 {
        let w = self.hi - self.lo;
        let s = self.slope();
        let disc = (self.f_hi * self.f_hi - 2.0 * s * r).max(0.0);
        let den = self.f_hi + disc.sqrt();
        let u = if den > 0.0 { 2.0 * r / den } else { 0.0 };
        u.clamp(0.0, w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Piece {
    Atom { v: f64, m: f64 },
    Seg(Segment),
}

impl Piece {
    fn end(&self) -> f64 {
        match self {
            Piece::Atom { v, .. } => *v,
            Piece::Seg(s) => s.hi,
        }
    }

    fn start(&self) -> f64 {
        match self {
            Piece::Atom { v, .. } => *v,
            Piece::Seg(s) => s.lo,
        }
    }

    fn mass(&self) -> f64 {
        match self {
            Piece::Atom { m, .. } => *m,
            Piece::Seg(s) => s.mass(),
        }
    }

    fn value(&self) -> f64 {
        match self {
            Piece::Atom { v, m } => v * m,
            Piece::Seg(s) => s.value_between(s.lo, s.hi),
        }
    }
}

/// A probability distribution on `[0, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist {
    atoms: Vec<(f64, f64)>,
    segments: Vec<Segment>,
    pieces: Vec<Piece>,
    cum_mass: Vec<f64>,
    cum_value: Vec<f64>,
}

impl Dist {
    pub fn point_mass(v: f64) -> Result<Self> {
        Self::from_parts(vec![(v, 1.0)], vec![])
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(b > a) {
            return Err(Error::InvalidDist(format!("uniform needs a < b, got [{a}, {b}]")));
        }
        let f = 1.0 / (b - a);
        Self::from_parts(
            vec![],
            vec![Segment {
                lo: a,
                hi: b,
                f_lo: f,
                f_hi: f,
            }],
        )
    }

    pub fn discrete(points: &[(f64, f64)]) -> Result<Self> {
        Self::from_parts(points.to_vec(), vec![])
    }

    pub fn linear(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        Self::from_parts(vec![], vec![Segment { lo, hi, f_lo, f_hi }])
    }

    /// Weighted mixture; weights must sum to one.
    pub fn mixture(weights: &[f64], components: &[Dist]) -> Result<Self> {
        if weights.len() != components.len() || weights.is_empty() {
            return Err(Error::InvalidDist("mixture needs one weight per component".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDist("mixture weights must be nonnegative".into()));
        }
        let mut atoms = Vec::new();
        let mut segs = Vec::new();
        for (w, c) in weights.iter().zip(components) {
            atoms.extend(c.atoms.iter().map(|&(v, m)| (v, w * m)));
            segs.extend(c.segments.iter().map(|s| Segment {
                f_lo: w * s.f_lo,
                f_hi: w * s.f_hi,
                ..*s
            }));
        }
        Self::from_parts(atoms, segs)
    }

    /// Builds a distribution from raw atoms and (possibly overlapping) segments.
    pub fn from_parts(atoms: Vec<(f64, f64)>, segments: Vec<Segment>) -> Result<Self> {
        for &(v, m) in &atoms {
            if !v.is_finite() || !m.is_finite() || v < 0.0 || m < 0.0 {
                return Err(Error::InvalidDist(format!("bad atom ({v}, {m})")));
            }
        }
        for s in &segments {
            let ok = [s.lo, s.hi, s.f_lo, s.f_hi].iter().all(|x| x.is_finite())
                && s.lo >= 0.0
                && s.hi > s.lo
                && s.f_lo >= 0.0
                && s.f_hi >= 0.0;
            if !ok {
                return Err(Error::InvalidDist(format!(
                    "bad segment [{}, {}] with densities ({}, {})",
                    s.lo, s.hi, s.f_lo, s.f_hi
                )));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum::<f64>() + segments.iter().map(Segment::mass).sum::<f64>();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDist(format!("total mass {total} is not 1")));
        }

        let mut breaks: Vec<f64> = segments.iter().flat_map(|s| [s.lo, s.hi]).collect();
        breaks.extend(atoms.iter().map(|a| a.0));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();

        // Sum the densities of every segment on each elementary cell.
        let ncell = breaks.len().saturating_sub(1);
        let mut f_left = vec![0.0; ncell];
        let mut f_right = vec![0.0; ncell];
        for s in &segments {
            let i0 = breaks.partition_point(|&b| b < s.lo);
            let i1 = breaks.partition_point(|&b| b < s.hi);
            for k in i0..i1 {
                f_left[k] += s.density(breaks[k]);
                f_right[k] += s.density(breaks[k + 1]);
            }
        }
        let mut cells: Vec<Segment> = (0..ncell)
            .filter(|&k| f_left[k] + f_right[k] > 0.0)
            .map(|k| Segment {
                lo: breaks[k],
                hi: breaks[k + 1],
                f_lo: f_left[k],
                f_hi: f_right[k],
            })
            .collect();

        let mut merged: Vec<(f64, f64)> = atoms.into_iter().filter(|a| a.1 > 0.0).collect();
        merged.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(merged.len());
        for (v, m) in merged {
            match atoms.last_mut() {
                Some(last) if last.0 == v => last.1 += m,
                _ => atoms.push((v, m)),
            }
        }

        let scale = 1.0 / total;
        for a in &mut atoms {
            a.1 *= scale;
        }
        for c in &mut cells {
            c.f_lo *= scale;
            c.f_hi *= scale;
        }
        if atoms.is_empty() && cells.is_empty() {
            return Err(Error::InvalidDist("distribution has no mass".into()));
        }
        Ok(Self::assemble(atoms, cells))
    }

    fn assemble(atoms: Vec<(f64, f64)>, segments: Vec<Segment>) -> Self {
        let mut pieces: Vec<Piece> = atoms
            .iter()
            .map(|&(v, m)| Piece::Atom { v, m })
            .chain(segments.iter().map(|&s| Piece::Seg(s)))
            .collect();
        // Atoms at a segment's lower end come first; the ends are then nondecreasing.
        pieces.sort_by(|a, b| {
            a.start().total_cmp(&b.start()).then_with(|| {
                let ka = matches!(a, Piece::Seg(_)) as u8;
                let kb = matches!(b, Piece::Seg(_)) as u8;
                ka.cmp(&kb)
            })
        });
        let mut cum_mass = Vec::with_capacity(pieces.len() + 1);
        let mut cum_value = Vec::with_capacity(pieces.len() + 1);
        let (mut m, mut v) = (0.0, 0.0);
        cum_mass.push(0.0);
        cum_value.push(0.0);
        for p in &pieces {
            m += p.mass();
            v += p.value();
            cum_mass.push(m);
            cum_value.push(v);
        }
        Self {
            atoms,
            segments,
            pieces,
            cum_mass,
            cum_value,
        }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub(crate) fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn has_atoms(&self) -> bool {
        !self.atoms.is_empty()
    }

    pub fn is_point_mass(&self) -> bool {
        self.segments.is_empty() && self.atoms.len() == 1
    }

    /// Largest point of the support.
    pub fn upper(&self) -> f64 {
        self.pieces.last().map_or(0.0, Piece::end)
    }

    /// Smallest point of the support.
    pub fn lower(&self) -> f64 {
        self.pieces.first().map_or(0.0, Piece::start)
    }

    pub fn total_mass(&self) -> f64 {
        *self.cum_mass.last().unwrap()
    }

    pub fn mean(&self) -> f64 {
        *self.cum_value.last().unwrap()
    }

    /// Every atom position and segment endpoint, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.pieces.iter().flat_map(|p| [p.start(), p.end()]).collect();
        b.dedup();
        b
    }

    /// Mass and `∫ x dH` over `[0, x]` (inclusive) or `[0, x)`.
    fn below(&self, x: f64, inclusive: bool) -> (f64, f64) {
        let j = if inclusive {
            self.pieces.partition_point(|p| p.end() <= x)
        } else {
            self.pieces.partition_point(|p| match p {
                Piece::Atom { v, .. } => *v < x,
                Piece::Seg(s) => s.hi <= x,
            })
        };
        let mut m = self.cum_mass[j];
        let mut v = self.cum_value[j];
        if let Some(Piece::Seg(s)) = self.pieces.get(j) {
            if x > s.lo {
                m += s.mass_between(s.lo, x);
                v += s.value_between(s.lo, x);
            }
        }
        (m, v)
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.below(x, true).0.clamp(0.0, 1.0)
    }

    /// `P(X < x)`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        self.below(x, false).0.clamp(0.0, 1.0)
    }

    /// `∫ x dH` over `(t, U]`, or over `[t, U]` when `include_atom` is set.
    pub fn upper_tail_value(&self, t: f64, include_atom: bool) -> f64 {
        let (_, v) = self.below(t, !include_atom);
        (self.mean() - v).max(0.0)
    }

    /// `P(X >= t)`.
    pub fn survival_left(&self, t: f64) -> f64 {
        (self.total_mass() - self.below(t, false).0).clamp(0.0, 1.0)
    }

    /// `E[(X - t)^+]`.
    pub fn expected_excess(&self, t: f64) -> f64 {
        let (m, v) = self.below(t, true);
        let above_mass = self.total_mass() - m;
        let above_value = self.mean() - v;
        (above_value - t * above_mass).max(0.0)
    }

    /// `E[X 1{X >= t}]`.
    pub fn truncated_value(&self, t: f64) -> f64 {
        self.upper_tail_value(t, true)
    }

    /// Generalized inverse `inf{x : F(x) >= u}`.
    pub fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return self.lower();
        }
        let n = self.pieces.len();
        let j = self.cum_mass[1..].partition_point(|&c| c < u);
        if j >= n {
            return self.upper();
        }
        match self.pieces[j] {
            Piece::Atom { v, .. } => v,
            Piece::Seg(s) => s.lo + s.offset_for_mass_from_lo(u - self.cum_mass[j]),
        }
    }

    /// `inf{c : P(X >= c) <= 1/2}`.
    pub fn lower_median(&self) -> f64 {
        self.quantile(0.5)
    }

    /// Mean of the top-`w` probability mass, splitting an atom proportionally if needed.
    pub fn superquantile(&self, w: f64) -> Result<f64> {
        if !(w > 0.0) || w > 1.0 + MASS_TOL {
            return Err(Error::InvalidParameter(format!(
                "superquantile weight {w} outside (0, 1]"
            )));
        }
        if w >= self.total_mass() {
            return Ok(self.mean() / self.total_mass());
        }
        let mut mass = 0.0;
        let mut value = 0.0;
        for p in self.pieces.iter().rev() {
            let pm = p.mass();
            if mass + pm < w {
                mass += pm;
                value += p.value();
                continue;
            }
            let need = w - mass;
            value += match *p {
                Piece::Atom { v, .. } => v * need,
                Piece::Seg(s) => {
                    let u = s.offset_for_mass_from_hi(need);
                    s.value_between(s.hi - u, s.hi)
                }
            };
            return Ok(value / w);
        }
        Ok(value / mass)
    }

    /// `(E[X | X < t], E[X | X >= t], P(X < t))`.
    pub fn conditional_split(&self, t: f64) -> Result<(f64, f64, f64)> {
        let (m_low, v_low) = self.below(t, false);
        let m_high = self.total_mass() - m_low;
        if !(m_low > 0.0) || !(m_high > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "split point {t} is not inside the support [{}, {}]",
                self.lower(),
                self.upper()
            )));
        }
        let v_high = self.mean() - v_low;
        Ok((v_low / m_low, v_high / m_high, m_low))
    }

    /// `∫_0^x F(y) dy = E[(x - X)^+]`, used by the mean-preserving-contraction check.
    pub fn integrated_cdf(&self, x: f64) -> f64 {
        let (m, v) = self.below(x, true);
        (x * m - v).max(0.0)
    }
}

/// JSON form of a distribution, as read from instance files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DistSpec {
    Uniform {
        a: f64,
        b: f64,
    },
    #[serde(rename = "pointmass")]
    PointMass {
        v: f64,
    },
    Discrete {
        points: Vec<(f64, f64)>,
    },
    Mixture {
        weights: Vec<f64>,
        components: Vec<DistSpec>,
    },
    Linear {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
}

impl DistSpec {
    pub fn build(&self) -> Result<Dist> {
        match self {
            DistSpec::Uniform { a, b } => Dist::uniform(*a, *b),
            DistSpec::PointMass { v } => Dist::point_mass(*v),
            DistSpec::Discrete { points } => Dist::discrete(points),
            DistSpec::Linear { lo, hi, f_lo, f_hi } => Dist::linear(*lo, *hi, *f_lo, *f_hi),
            DistSpec::Mixture { weights, components } => {
                let comps = components.iter().map(DistSpec::build).collect::<Result<Vec<_>>>()?;
                Dist::mixture(weights, &comps)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn means() {
        assert!(close(Dist::uniform(0.0, 0.92).unwrap().mean(), 0.46, 1e-12));
        assert_eq!(Dist::point_mass(0.2).unwrap().mean(), 0.2);
        assert!(close(
            Dist::discrete(&[(0.0, 0.8), (1.0, 0.2)]).unwrap().mean(),
            0.2,
            1e-12
        ));
    }

    #[test]
    fn cdf_limits_at_atoms() {
        let d = Dist::discrete(&[(0.0, 0.8), (1.0, 0.2)]).unwrap();
        assert!(close(d.cdf(0.0), 0.8, 1e-12));
        assert_eq!(d.cdf_left(0.0), 0.0);
        assert!(close(d.cdf_left(1.0), 0.8, 1e-12));
        assert!(close(d.cdf(1.0), 1.0, 1e-12));
        let u = Dist::uniform(0.0, 0.5).unwrap();
        assert!(close(u.cdf(0.25), 0.5, 1e-12));
    }

    #[test]
    fn mixture_flattening() {
        let lo = Dist::uniform(0.0, 1.0 / 24.0).unwrap();
        let hi = Dist::uniform(23.0 / 24.0, 1.0).unwrap();
        let h1 = Dist::mixture(&[5.0 / 6.0, 1.0 / 6.0], &[lo.clone(), hi.clone()]).unwrap();
        assert!(close(h1.cdf(1.0 / 24.0), 5.0 / 6.0, 1e-12));
        assert!(close(h1.mean(), 13.0 / 72.0, 1e-12));
        let h2 = Dist::mixture(&[0.6, 0.4], &[lo, hi]).unwrap();
        assert!(close(h2.mean(), 97.0 / 240.0, 1e-12));

        // Overlapping segments and an interior atom.
        let a = Dist::uniform(0.0, 2.0).unwrap();
        let b = Dist::uniform(1.0, 3.0).unwrap();
        let c = Dist::point_mass(1.5).unwrap();
        let m = Dist::mixture(&[0.25, 0.25, 0.5], &[a, b, c]).unwrap();
        assert!(close(m.total_mass(), 1.0, 1e-12));
        assert!(close(m.mean(), 0.25 * 1.0 + 0.25 * 2.0 + 0.5 * 1.5, 1e-12));
        assert!(close(m.cdf(1.5), 0.25 * 0.75 + 0.25 * 0.25 + 0.5, 1e-12));
        assert!(close(m.cdf_left(1.5), 0.25 * 0.75 + 0.25 * 0.25, 1e-12));
        assert_eq!(m.segments().len(), 4);
    }

    #[test]
    fn tails() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        assert!(close(u.upper_tail_value(0.5, false), 0.375, 1e-12));
        let d = Dist::discrete(&[(0.0, 0.8), (1.0, 0.2)]).unwrap();
        assert!(close(d.upper_tail_value(0.5, false), 0.2, 1e-12));
        assert!(close(d.upper_tail_value(1.0, true), 0.2, 1e-12));
        assert_eq!(d.upper_tail_value(1.0, false), 0.0);
        assert_eq!(u.upper_tail_value(0.0, true), u.mean());
    }

    #[test]
    fn superquantiles() {
        let d = Dist::discrete(&[(0.0, 0.8), (1.0, 0.2)]).unwrap();
        assert!(close(d.superquantile(0.5).unwrap(), 0.4, 1e-12));
        let u = Dist::uniform(0.0, 1.0).unwrap();
        assert!(close(u.superquantile(0.5).unwrap(), 0.75, 1e-12));
        assert!(close(u.superquantile(1.0).unwrap(), 0.5, 1e-12));
        assert!(u.superquantile(0.0).is_err());
    }

    #[test]
    fn quantiles() {
        let u = Dist::uniform(0.0, 0.5).unwrap();
        assert!(close(u.quantile(0.5), 0.25, 1e-12));
        let d = Dist::discrete(&[(0.0, 0.8), (1.0, 0.2)]).unwrap();
        assert_eq!(d.lower_median(), 0.0);
        assert_eq!(d.quantile(0.8), 0.0);
        assert_eq!(d.quantile(0.81), 1.0);
        let tri = Dist::linear(0.0, 1.0, 0.0, 2.0).unwrap();
        assert!(close(tri.quantile(0.25), 0.5, 1e-12));
    }

    #[test]
    fn conditional_splits() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let (a, b, m) = u.conditional_split(0.5).unwrap();
        assert!(close(a, 0.25, 1e-12) && close(b, 0.75, 1e-12) && close(m, 0.5, 1e-12));
        let d = Dist::discrete(&[(0.0, 0.8), (1.0, 0.2)]).unwrap();
        let (a, b, m) = d.conditional_split(1.0).unwrap();
        assert!(a == 0.0 && close(b, 1.0, 1e-15) && close(m, 0.8, 1e-15));
        assert!(u.conditional_split(1.5).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Dist::discrete(&[(0.0, 0.5), (1.0, 0.6)]).is_err());
        assert!(Dist::uniform(1.0, 1.0).is_err());
        assert!(Dist::discrete(&[(-1.0, 1.0)]).is_err());
        assert!(Dist::linear(0.0, 1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn json_schema() {
        let text = r#"{"type":"mixture","weights":[0.5,0.5],"components":[
            {"type":"uniform","a":0,"b":1},{"type":"discrete","points":[[0,0.5],[2,0.5]]}]}"#;
        let spec: DistSpec = serde_json::from_str(text).unwrap();
        let d = spec.build().unwrap();
        assert!(close(d.mean(), 0.75, 1e-12));
        let pm: DistSpec = serde_json::from_str(r#"{"type":"pointmass","v":3}"#).unwrap();
        assert_eq!(pm.build().unwrap().mean(), 3.0);
    }
}
