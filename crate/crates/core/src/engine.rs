//! Hybrid CA evolution.
//!
//! One hybrid step evolves output cells `0..2r` with the border rule and all
//! other cells with the main rule. Both rules toggle on the same side and the
//! border rule is absolute, which makes the step a bijection:
//! [`preimage_step`] is the exact inverse of [`forward_step`].
//!
//! For a left-toggle pair the pre-image is rebuilt as follows:
//!
//! 1. Border cells: output cell `i` (for `i < 2r`) is a copy or complement of
//!    pre-image cell `i - r`, so cells `N-r..N` and `0..r` follow directly.
//! 2. Main cells: for `i = N-1` down to `2r`, cell `i - r` is the only unknown
//!    in the neighborhood of output cell `i`; the toggle property fixes it.
//!
//! Right-toggle pairs mirror this (border gives cells `r..3r`, main cells are
//! solved left to right). The main chain is inherently sequential.

use std::collections::BTreeSet;

use crate::error::{HcaError, Result};
use crate::lattice::{Lattice, ToggleDirection};
use crate::rule::Rule;

/// Largest lattice accepted by [`brute_force_preimages`].
pub const BRUTE_FORCE_MAX_CELLS: usize = 24;

/// Source of the two rule lookups for one step. Lets the cipher evaluate
/// rules straight from key bits instead of materialized tables.
pub(crate) trait StepRules {
    fn radius(&self) -> usize;
    fn main(&self, neighborhood: usize) -> u8;
    fn border(&self, neighborhood: usize) -> u8;
}

/// Main and border rules plus the lattice size they are applied to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridStepConfig {
    main: Rule,
    border: Rule,
    size: usize,
    direction: Option<ToggleDirection>,
}

impl HybridStepConfig {
    /// Validated pair: same radius, main rule toggles in `direction`, border
    /// rule is absolute in `direction`, and `size >= 2r + 2`.
    pub fn new(main: Rule, border: Rule, size: usize, direction: ToggleDirection) -> Result<Self> {
        let mut cfg = HybridStepConfig::unchecked(main, border, size)?;
        if !cfg.main.is_toggle(direction) {
            return Err(HcaError::InvalidConfig(format!(
                "main rule {} is not {direction}-toggle",
                cfg.main
            )));
        }
        if !cfg.border.is_absolute(direction) {
            return Err(HcaError::InvalidConfig(format!(
                "border rule {} is not one of the absolute {direction}-toggle rules",
                cfg.border
            )));
        }
        cfg.direction = Some(direction);
        Ok(cfg)
    }

    /// Any rule pair. Forward evolution and brute-force enumeration work, but
    /// [`preimage_step`] refuses it. Used to probe non-toggle counterexamples.
    pub fn unchecked(main: Rule, border: Rule, size: usize) -> Result<Self> {
        if main.radius() != border.radius() {
            return Err(HcaError::InvalidConfig(format!(
                "main radius {} differs from border radius {}",
                main.radius(),
                border.radius()
            )));
        }
        let min = 2 * main.radius() + 2;
        if size < min {
            return Err(HcaError::InvalidConfig(format!(
                "lattice of {size} cells is too small for radius {} (need at least {min})",
                main.radius()
            )));
        }
        Ok(HybridStepConfig {
            main,
            border,
            size,
            direction: None,
        })
    }

    pub fn main(&self) -> &Rule {
        &self.main
    }

    pub fn border(&self) -> &Rule {
        &self.border
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        self.main.radius()
    }

    /// `Some` only for validated configurations.
    pub fn direction(&self) -> Option<ToggleDirection> {
        self.direction
    }

    fn check_len(&self, s: &Lattice) -> Result<()> {
        if s.len() != self.size {
            return Err(HcaError::LengthMismatch {
                expected: self.size,
                found: s.len(),
            });
        }
        Ok(())
    }
}

impl StepRules for HybridStepConfig {
    fn radius(&self) -> usize {
        self.main.radius()
    }

    #[inline]
    fn main(&self, neighborhood: usize) -> u8 {
        self.main.output(neighborhood)
    }

    #[inline]
    fn border(&self, neighborhood: usize) -> u8 {
        self.border.output(neighborhood)
    }
}

/// True iff `rule` toggles in `direction`.
pub fn is_toggle(rule: &Rule, direction: ToggleDirection) -> bool {
    rule.is_toggle(direction)
}

/// One forward (decryption-direction) step.
pub fn forward_step(s: &Lattice, cfg: &HybridStepConfig) -> Result<Lattice> {
    cfg.check_len(s)?;
    let mut out = vec![0u8; s.len()];
    forward_cells(s.cells(), &mut out, cfg);
    Ok(Lattice::from_raw(out))
}

/// The unique `p` with `forward_step(p, cfg) == s`.
pub fn preimage_step(s: &Lattice, cfg: &HybridStepConfig) -> Result<Lattice> {
    cfg.check_len(s)?;
    let direction = cfg.direction.ok_or_else(|| {
        HcaError::InvalidConfig("pre-image needs a validated toggle configuration".into())
    })?;
    let mut out = vec![0u8; s.len()];
    preimage_cells(s.cells(), &mut out, cfg, direction);
    Ok(Lattice::from_raw(out))
}

/// Every `p` with `forward_step(p, cfg) == s`, by trying all `2^N` lattices.
pub fn brute_force_preimages(s: &Lattice, cfg: &HybridStepConfig) -> Result<BTreeSet<Lattice>> {
    cfg.check_len(s)?;
    let n = cfg.size;
    if n > BRUTE_FORCE_MAX_CELLS {
        return Err(HcaError::LimitExceeded {
            what: "lattice size",
            value: n,
            limit: BRUTE_FORCE_MAX_CELLS,
        });
    }
    let mut found = BTreeSet::new();
    let mut candidate = vec![0u8; n];
    let mut image = vec![0u8; n];
    for code in 0u32..(1u32 << n) {
        for (i, c) in candidate.iter_mut().enumerate() {
            *c = ((code >> (n - 1 - i)) & 1) as u8;
        }
        forward_cells(&candidate, &mut image, cfg);
        if image == s.cells() {
            found.insert(Lattice::from_raw(candidate.clone()));
        }
    }
    Ok(found)
}

/// Forward step over raw cells. `dst.len() == src.len() >= 2r + 2`.
pub(crate) fn forward_cells<R: StepRules>(src: &[u8], dst: &mut [u8], rules: &R) {
    let n = src.len();
    let r = rules.radius();
    let span = 2 * r;
    let mask = (1usize << (span + 1)) - 1;

    // neighborhood of cell 0: src[n-r..n] ++ src[0..=r]
    let mut window = 0usize;
    for k in 0..=span {
        window = (window << 1) | src[(n - r + k) % n] as usize;
    }
    let mut incoming = r + 1;
    for (i, out) in dst.iter_mut().enumerate() {
        *out = if i < span {
            rules.border(window)
        } else {
            rules.main(window)
        };
        if incoming == n {
            incoming = 0;
        }
        window = ((window << 1) | src[incoming] as usize) & mask;
        incoming += 1;
    }
}

/// Pre-image over raw cells for a validated rule pair.
pub(crate) fn preimage_cells<R: StepRules>(
    s: &[u8],
    p: &mut [u8],
    rules: &R,
    direction: ToggleDirection,
) {
    let n = s.len();
    let r = rules.radius();
    let span = 2 * r;
    // Absolute border rule: output = extreme neighbor XOR border(0).
    let border_flip = rules.border(0);

    match direction {
        ToggleDirection::Left => {
            for (i, &cell) in s.iter().enumerate().take(span) {
                p[(i + n - r) % n] = cell ^ border_flip;
            }
            // Known cells p[j+1..=j+2r] for j = n-1-r, first cell most significant.
            let mut known = 0usize;
            for k in 1..=span {
                known = (known << 1) | p[(n - 1 - r + k) % n] as usize;
            }
            for i in (span..n).rev() {
                let j = i - r;
                let bit = (rules.main(known) != s[i]) as u8;
                p[j] = bit;
                known = ((bit as usize) << (span - 1)) | (known >> 1);
            }
        }
        ToggleDirection::Right => {
            for (i, &cell) in s.iter().enumerate().take(span) {
                p[(i + r) % n] = cell ^ border_flip;
            }
            let known_mask = (1usize << span) - 1;
            let mut known = 0usize;
            for k in r..r + span {
                known = (known << 1) | p[k % n] as usize;
            }
            for (i, &cell) in s.iter().enumerate().skip(span) {
                let bit = (rules.main(known << 1) != cell) as u8;
                let j = i + r;
                p[if j >= n { j - n } else { j }] = bit;
                known = ((known << 1) | bit as usize) & known_mask;
            }
        }
    }
}
