//! Measurement-layer reductions: joint and marginal position
//! distributions, direction-pair probabilities, clustering defect, branch
//! weights, and the plain-text/image serializations of the joint grid.
//!
//! Positions are always reported on incoming modes, i.e. by the vertex a
//! photon is entering at the given step.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::coin::Transfer;
use crate::error::Result;
use crate::fock::{step, Statistics, TwoPhotonState};
use crate::lattice::{direction_of, propagate_inverse, Direction};

/// Joint probability of finding the photons at a pair of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    grid: BTreeMap<(i32, i32), f64>,
    pub step: u32,
}

impl JointDistribution {
    pub fn probability(&self, s1: i32, s2: i32) -> f64 {
        self.grid.get(&(s1, s2)).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.grid.values().sum()
    }

    /// Probability mass off the same-site diagonal.
    pub fn off_diagonal_mass(&self) -> f64 {
        self.grid
            .iter()
            .filter(|((s1, s2), _)| s1 != s2)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i32, i32), &f64)> {
        self.grid.iter()
    }

    pub fn max_probability(&self) -> f64 {
        self.grid.values().cloned().fold(0.0, f64::max)
    }

    /// Sites with any mass, in ascending order.
    pub fn support_sites(&self) -> Vec<i32> {
        let mut sites: Vec<i32> = self
            .grid
            .keys()
            .flat_map(|&(a, b)| [a, b])
            .collect();
        sites.sort_unstable();
        sites.dedup();
        sites
    }

    /// `site1,site2,probability,modulus` rows for every populated cell.
    /// The modulus column is the square root of the probability, the
    /// amplitude-scale view of the same grid.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("site1,site2,probability,modulus\n");
        for (&(s1, s2), &p) in &self.grid {
            let _ = writeln!(out, "{s1},{s2},{p},{}", p.sqrt());
        }
        out
    }

    fn render_range(&self) -> i32 {
        self.grid
            .keys()
            .flat_map(|&(a, b)| [a.abs(), b.abs()])
            .max()
            .unwrap_or(0)
            .max(1)
    }

    /// Binary grayscale pixmap of the grid, max-normalized on a linear
    /// scale, white background with darker cells for higher probability.
    /// `site1` grows rightward, `site2` downward from the top-left corner
    /// which sits at `(-range, +range)`.
    pub fn to_ppm(&self, cell_px: usize) -> Vec<u8> {
        let range = self.render_range();
        let cells = (2 * range + 1) as usize;
        let px = cells * cell_px;
        let max = self.max_probability();
        let mut body = Vec::with_capacity(px * px * 3);
        for row in 0..px {
            let s2 = range - (row / cell_px) as i32;
            for col in 0..px {
                let s1 = (col / cell_px) as i32 - range;
                let p = self.probability(s1, s2);
                let shade = if max > 0.0 {
                    255 - (255.0 * p / max).round() as u8
                } else {
                    255
                };
                body.extend_from_slice(&[shade, shade, shade]);
            }
        }
        let mut out = format!("P6\n{px} {px}\n255\n").into_bytes();
        out.extend_from_slice(&body);
        out
    }

    /// SVG rendering with one rectangle per populated cell.
    pub fn to_svg(&self, cell_px: usize) -> String {
        let range = self.render_range();
        let cells = (2 * range + 1) as usize;
        let size = cells * cell_px;
        let max = self.max_probability();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
        );
        let _ = writeln!(
            out,
            "  <rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>"
        );
        for (&(s1, s2), &p) in &self.grid {
            if max <= 0.0 {
                continue;
            }
            let x = (s1 + range) as usize * cell_px;
            let y = (range - s2) as usize * cell_px;
            let opacity = p / max;
            let _ = writeln!(
                out,
                "  <rect x=\"{x}\" y=\"{y}\" width=\"{cell_px}\" height=\"{cell_px}\" fill=\"black\" fill-opacity=\"{opacity}\"/>"
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Marginalizes a state over ports and polarization, keeping the vertex
/// each photon is entering. Boson unordered outcomes are split evenly
/// across `(i,j)` and `(j,i)` so the displayed grid is symmetric.
pub fn joint_site_distribution(state: &TwoPhotonState) -> JointDistribution {
    let mut grid: BTreeMap<(i32, i32), f64> = BTreeMap::new();
    for (pair, amp) in state.iter() {
        let (s1, s2) = pair.sites();
        let p = amp.norm_sqr();
        match state.statistics() {
            Statistics::Distinguishable => {
                *grid.entry((s1, s2)).or_insert(0.0) += p;
            }
            Statistics::Boson => {
                if s1 == s2 {
                    *grid.entry((s1, s2)).or_insert(0.0) += p;
                } else {
                    *grid.entry((s1, s2)).or_insert(0.0) += p / 2.0;
                    *grid.entry((s2, s1)).or_insert(0.0) += p / 2.0;
                }
            }
        }
    }
    JointDistribution {
        grid,
        step: state.time(),
    }
}

/// Total probability on pairs whose photons travel in different
/// directions.
pub fn opposite_direction_mass(state: &TwoPhotonState) -> f64 {
    state
        .iter()
        .filter(|(pair, _)| direction_of(pair.first()) != direction_of(pair.second()))
        .map(|(_, amp)| amp.norm_sqr())
        .sum()
}

/// Probabilities of the photon pair leaving a scattering step leftward,
/// rightward, or split between the two directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionPairs {
    pub ll: f64,
    pub rr: f64,
    pub mixed: f64,
}

/// Direction-pair masses of a state as it stands.
pub fn direction_masses(state: &TwoPhotonState) -> DirectionPairs {
    let mut out = DirectionPairs {
        ll: 0.0,
        rr: 0.0,
        mixed: 0.0,
    };
    for (pair, amp) in state.iter() {
        let p = amp.norm_sqr();
        match (direction_of(pair.first()), direction_of(pair.second())) {
            (Direction::L, Direction::L) => out.ll += p,
            (Direction::R, Direction::R) => out.rr += p,
            _ => out.mixed += p,
        }
    }
    out
}

/// Applies one scattering step and sums the outcome probabilities by
/// exit-side pair.
pub fn direction_pair_probabilities(
    state: &TwoPhotonState,
    transfer: &Transfer,
) -> Result<DirectionPairs> {
    Ok(direction_masses(&step(state, transfer)?))
}

/// Applies one scattering step and bins outcome probabilities by the
/// unordered pair of ports the photons exited through. All ten port pairs
/// are present in the result, zeros included.
pub fn exit_port_table(
    state: &TwoPhotonState,
    transfer: &Transfer,
) -> Result<BTreeMap<(u8, u8), f64>> {
    let mut table: BTreeMap<(u8, u8), f64> = BTreeMap::new();
    for i in 1..=4u8 {
        for j in i..=4u8 {
            table.insert((i, j), 0.0);
        }
    }
    let lattice = transfer.lattice();
    let stepped = step(state, transfer)?;
    for (pair, amp) in stepped.iter() {
        let exit_a = propagate_inverse(pair.first(), &lattice)?.port.number();
        let exit_b = propagate_inverse(pair.second(), &lattice)?.port.number();
        let key = (exit_a.min(exit_b), exit_a.max(exit_b));
        *table.entry(key).or_insert(0.0) += amp.norm_sqr();
    }
    Ok(table)
}

/// Probability mass off the same-site diagonal; zero for a perfectly
/// clustered state.
pub fn clustering_defect(state: &TwoPhotonState) -> f64 {
    joint_site_distribution(state).off_diagonal_mass()
}

/// Split of a walk started from the origin pair into the component
/// oscillating near the starting point and the ballistically advancing
/// front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchWeights {
    pub oscillating: f64,
    pub ballistic: f64,
    pub other: f64,
    /// Expected front site at this step for a rightward start; equals the
    /// step counter under incoming-mode labeling.
    pub front_site: i32,
}

/// Decomposes the joint distribution into the origin window (sites within
/// `origin_window_radius` of 0), the ballistic front cell, and the rest.
/// Meaningful for states evolved from the origin pair once the front has
/// left the window (step > radius).
pub fn branch_weights(state: &TwoPhotonState, origin_window_radius: u32) -> BranchWeights {
    let front = state.time() as i32;
    let joint = joint_site_distribution(state);
    let radius = origin_window_radius as i32;
    let mut weights = BranchWeights {
        oscillating: 0.0,
        ballistic: 0.0,
        other: 0.0,
        front_site: front,
    };
    for (&(s1, s2), &p) in joint.iter() {
        if s1 == front && s2 == front {
            weights.ballistic += p;
        } else if s1.abs() <= radius && s2.abs() <= radius {
            weights.oscillating += p;
        } else {
            weights.other += p;
        }
    }
    weights
}

/// Complex amplitude table of a distribution-like map, formatted as CSV
/// with a fixed header. Shared by the CLI writers.
pub fn amplitude_csv(rows: &[(String, Complex64)]) -> String {
    let mut out = String::from("mode,re,im\n");
    for (mode, amp) in rows {
        let _ = writeln!(out, "{mode},{},{}", amp.re, amp.im);
    }
    out
}
