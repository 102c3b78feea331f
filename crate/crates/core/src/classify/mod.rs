//! Invariant fingerprints, boundary conjugacies between graphs of equal
//! Betti number, and surveys over enumerated graph families.

mod conjugacy;
mod survey;

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ktheory::{edge_gcd_invariant, k0_boundary_algebra, BoundaryK0};
use crate::multigraph::{BettiNumber, Multigraph};
use crate::nonbacktracking::{
    bass_hashimoto, ihara_zeta_recip, perron_root, DirEdge, DirectedEdgeSet, Poly,
};

pub use conjugacy::{
    algebra_transport, build_conjugacy, Conjugacy, ConjugacyMap, EquivarianceReport,
    EquivarianceViolation, Pairing,
};
pub use survey::{survey, SurveyReport, SurveyRow};

/// Default closed-path length bound for the length spectrum.
pub const DEFAULT_SPECTRUM_LENGTH: usize = 5;
/// Largest supported length bound.
pub const MAX_SPECTRUM_LENGTH: usize = 6;
/// Perron roots closer than this compare equal.
pub const LAMBDA_TOLERANCE: f64 = 1e-9;

/// Number of conjugacy classes of deck transformations with a given
/// translation length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SpectrumEntry {
    pub length: usize,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fingerprint {
    pub g: BettiNumber,
    pub k0: BoundaryK0,
    pub gcd_invariant: usize,
    pub zeta: Poly,
    pub lambda: f64,
    pub length_spectrum: Vec<SpectrumEntry>,
}

/// Field-by-field comparison of two fingerprints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FingerprintDiff {
    pub g_equal: bool,
    pub k0_equal: bool,
    pub gcd_equal: bool,
    pub zeta_equal: bool,
    pub lambda_equal: bool,
    pub spectrum_equal: bool,
}

impl FingerprintDiff {
    pub fn all_equal(&self) -> bool {
        self.g_equal
            && self.k0_equal
            && self.gcd_equal
            && self.zeta_equal
            && self.lambda_equal
            && self.spectrum_equal
    }
}

impl Fingerprint {
    pub fn diff(&self, other: &Fingerprint) -> FingerprintDiff {
        FingerprintDiff {
            g_equal: self.g == other.g,
            k0_equal: self.k0 == other.k0,
            gcd_equal: self.gcd_invariant == other.gcd_invariant,
            zeta_equal: self.zeta == other.zeta,
            lambda_equal: (self.lambda - other.lambda).abs() <= LAMBDA_TOLERANCE,
            spectrum_equal: self.length_spectrum == other.length_spectrum,
        }
    }

    pub fn matches(&self, other: &Fingerprint) -> bool {
        self.diff(other).all_equal()
    }
}

pub fn fingerprint(g: &Multigraph, spectrum_length: usize) -> Result<Fingerprint> {
    let betti = g.require_admissible()?;
    if spectrum_length > MAX_SPECTRUM_LENGTH {
        return Err(Error::Bound(format!(
            "spectrum length {spectrum_length} exceeds {MAX_SPECTRUM_LENGTH}"
        )));
    }
    let t = bass_hashimoto(g)?;
    Ok(Fingerprint {
        g: betti,
        k0: k0_boundary_algebra(betti.get())?,
        gcd_invariant: edge_gcd_invariant(g)?,
        zeta: ihara_zeta_recip(g)?,
        lambda: perron_root(&t)?.lambda,
        length_spectrum: length_spectrum(g, spectrum_length)?,
    })
}

/// Conjugacy classes of nontrivial deck transformations by translation
/// length `1..=max_len`.
///
/// A conjugacy class is a cyclically reduced closed non-backtracking walk up
/// to rotation, so the count is independent of the chosen generators.
pub fn length_spectrum(g: &Multigraph, max_len: usize) -> Result<Vec<SpectrumEntry>> {
    g.require_admissible()?;
    let edges = DirectedEdgeSet::new(g);
    let mut out = Vec::with_capacity(max_len);
    for n in 1..=max_len {
        let mut classes: HashSet<Vec<DirEdge>> = HashSet::new();
        let mut buf = Vec::with_capacity(n);
        for start in 0..edges.len() {
            buf.push(start);
            closed_walks(&edges, &mut buf, n, &mut |w| {
                classes.insert(min_rotation(w));
            });
            buf.pop();
        }
        out.push(SpectrumEntry {
            length: n,
            count: classes.len() as u64,
        });
    }
    Ok(out)
}

fn closed_walks(
    edges: &DirectedEdgeSet,
    buf: &mut Vec<DirEdge>,
    n: usize,
    f: &mut dyn FnMut(&[DirEdge]),
) {
    let last = *buf.last().expect("nonempty");
    if buf.len() == n {
        if edges.successors(last).contains(&buf[0]) {
            f(buf);
        }
        return;
    }
    for &s in edges.successors(last) {
        buf.push(s);
        closed_walks(edges, buf, n, f);
        buf.pop();
    }
}

fn min_rotation(w: &[DirEdge]) -> Vec<DirEdge> {
    (0..w.len())
        .map(|k| [&w[k..], &w[..k]].concat())
        .min()
        .expect("nonempty walk")
}
