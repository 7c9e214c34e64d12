//! Reduction of a core transition list into fine-structure multiplets.

use super::transitions::{Transition, TransitionList};

/// Transitions weaker than this fraction of the strongest one are ignored.
const WEAK_FRACTION: f64 = 1e-3;

/// A cluster of nearly coincident transitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineGroup {
    pub frequency_mhz: f64,
    pub intensity: f64,
    pub count: usize,
}

/// All transitions between one pair of electron manifolds.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplet {
    pub manifold: (usize, usize),
    /// Intensity-weighted centroid of the whole multiplet.
    pub centroid_mhz: f64,
    /// Centroid of the lines whose final nuclear state has ⟨M²⟩ < 1/4.
    pub center_mhz: f64,
    /// Groups in ascending frequency.
    pub groups: Vec<LineGroup>,
}

impl Multiplet {
    /// Group intensities scaled to sum to `total`.
    pub fn ratios(&self, total: f64) -> Vec<f64> {
        let sum: f64 = self.groups.iter().map(|g| g.intensity).sum();
        self.groups.iter().map(|g| g.intensity / sum * total).collect()
    }

    /// Least-squares slope of group frequency against group index.
    pub fn spacing_mhz(&self) -> Option<f64> {
        let n = self.groups.len();
        if n < 2 {
            return None;
        }
        let xm = (n - 1) as f64 / 2.0;
        let ym = self.groups.iter().map(|g| g.frequency_mhz).sum::<f64>() / n as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for (i, g) in self.groups.iter().enumerate() {
            let dx = i as f64 - xm;
            num += dx * (g.frequency_mhz - ym);
            den += dx * dx;
        }
        Some(num / den)
    }
}

fn centroid<'a>(items: impl Iterator<Item = &'a Transition>) -> (f64, f64) {
    let (mut w, mut wf) = (0.0, 0.0);
    for t in items {
        w += t.intensity;
        wf += t.intensity * t.frequency_mhz;
    }
    (if w > 0.0 { wf / w } else { f64::NAN }, w)
}

/// Splits the inter-manifold transitions by manifold pair and clusters each
/// set into groups, starting a new group whenever consecutive lines are more
/// than `gap_mhz` apart. Multiplets come out in ascending centroid.
pub fn multiplets(core: &TransitionList, gap_mhz: f64) -> Vec<Multiplet> {
    let max = core.entries.iter().map(|t| t.intensity).fold(0.0, f64::max);
    let mut pairs: Vec<(usize, usize)> = core
        .entries
        .iter()
        .filter(|t| t.manifold.0 != t.manifold.1)
        .map(|t| t.manifold)
        .collect();
    pairs.sort_unstable();
    pairs.dedup();

    let mut out: Vec<Multiplet> = pairs
        .into_iter()
        .filter_map(|pair| {
            let mut lines: Vec<&Transition> = core
                .entries
                .iter()
                .filter(|t| t.manifold == pair && t.intensity > WEAK_FRACTION * max)
                .collect();
            if lines.is_empty() {
                return None;
            }
            lines.sort_by(|a, b| a.frequency_mhz.total_cmp(&b.frequency_mhz));
            let mut groups: Vec<Vec<&Transition>> = Vec::new();
            for t in lines.iter().copied() {
                match groups.last_mut() {
                    Some(g) if t.frequency_mhz - g.last().unwrap().frequency_mhz <= gap_mhz => g.push(t),
                    _ => groups.push(vec![t]),
                }
            }
            let (centroid_mhz, _) = centroid(lines.iter().copied());
            let (center_mhz, _) = centroid(lines.iter().copied().filter(|t| t.nuclear_m_sq.1 < 0.25));
            let groups = groups
                .iter()
                .map(|g| {
                    let (f, w) = centroid(g.iter().copied());
                    LineGroup {
                        frequency_mhz: f,
                        intensity: w,
                        count: g.len(),
                    }
                })
                .collect();
            Some(Multiplet {
                manifold: pair,
                centroid_mhz,
                center_mhz,
                groups,
            })
        })
        .collect();
    out.sort_by(|a, b| a.centroid_mhz.total_cmp(&b.centroid_mhz));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(f: f64, w: f64, m_sq: f64) -> Transition {
        Transition {
            frequency_mhz: f,
            intensity: w,
            initial: 0,
            final_state: 1,
            manifold: (0, 1),
            nuclear_m: (0.0, 0.0),
            nuclear_m_sq: (0.0, m_sq),
        }
    }

    #[test]
    fn groups_and_spacing() {
        let list = TransitionList {
            entries: vec![t(100.0, 1.0, 1.0), t(101.0, 1.0, 1.0), t(150.0, 2.0, 0.0), t(200.0, 1.0, 1.0)],
        };
        let m = multiplets(&list, 10.0);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].groups.len(), 3);
        assert_eq!(m[0].groups[0].count, 2);
        assert!((m[0].groups[0].frequency_mhz - 100.5).abs() < 1e-12);
        assert_eq!(m[0].center_mhz, 150.0);
        assert!((m[0].spacing_mhz().unwrap() - 49.75).abs() < 1e-12);
        assert_eq!(m[0].ratios(4.0), [2.0, 2.0, 1.0].iter().map(|x| x * 4.0 / 5.0).collect::<Vec<_>>());
    }
}
