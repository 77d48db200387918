//! CA rule tables.
//!
//! A radius-`r` rule maps each `(2r+1)`-cell neighborhood to one output bit.
//! Neighborhoods are encoded as integers with the leftmost neighbor as the
//! most significant bit, so `table[n]` is the output for neighborhood `n`.

use std::fmt;

use crate::error::{HcaError, Result};
use crate::lattice::ToggleDirection;

/// Largest radius accepted anywhere in the crate (an 8193-bit table).
pub const MAX_RADIUS: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    radius: usize,
    table: Vec<u8>,
    toggle: Option<ToggleDirection>,
}

impl Rule {
    /// Builds a rule from its output table, recording the toggle direction it
    /// satisfies (left is preferred when a table toggles on both sides).
    pub fn from_table(radius: usize, table: impl Into<Vec<u8>>) -> Result<Self> {
        let table = table.into();
        check_radius(radius)?;
        let expected = 1usize << (2 * radius + 1);
        if table.len() != expected {
            return Err(HcaError::InvalidRule(format!(
                "radius {radius} needs a {expected}-entry table, got {}",
                table.len()
            )));
        }
        if let Some(pos) = table.iter().position(|&b| b > 1) {
            return Err(HcaError::InvalidRule(format!(
                "table entry {pos} is {} (must be 0 or 1)",
                table[pos]
            )));
        }
        let toggle = [ToggleDirection::Left, ToggleDirection::Right]
            .into_iter()
            .find(|&d| table_is_toggle(radius, &table, d));
        Ok(Rule {
            radius,
            table,
            toggle,
        })
    }

    /// Like [`Rule::from_table`] but pins the toggle metadata to `direction`,
    /// failing if the table does not toggle that way.
    pub fn with_toggle(
        radius: usize,
        table: impl Into<Vec<u8>>,
        direction: ToggleDirection,
    ) -> Result<Self> {
        let mut rule = Rule::from_table(radius, table)?;
        if !rule.is_toggle(direction) {
            return Err(HcaError::InvalidRule(format!(
                "table is not a {direction}-toggle rule"
            )));
        }
        rule.toggle = Some(direction);
        Ok(rule)
    }

    /// Radius-1 rule from its Wolfram number: `table[n] = (number >> n) & 1`.
    pub fn elementary(number: u8) -> Self {
        let table: Vec<u8> = (0..8).map(|n| (number >> n) & 1).collect();
        Rule::from_table(1, table).expect("8-entry table is always valid")
    }

    /// Radius-1 rule from its table written in ascending neighborhood order,
    /// e.g. `"01111000"` for rule 30.
    pub fn from_bit_str(radius: usize, text: &str) -> Result<Self> {
        let table = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(HcaError::InvalidRule(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Rule::from_table(radius, table)
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn neighborhood_size(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn toggle(&self) -> Option<ToggleDirection> {
        self.toggle
    }

    #[inline]
    pub fn output(&self, neighborhood: usize) -> u8 {
        self.table[neighborhood]
    }

    /// True iff flipping the extreme neighbor on side `direction` always
    /// flips the output.
    pub fn is_toggle(&self, direction: ToggleDirection) -> bool {
        table_is_toggle(self.radius, &self.table, direction)
    }

    /// True iff the output is a copy or complement of the extreme neighbor on
    /// side `direction`, independent of every other cell.
    pub fn is_absolute(&self, direction: ToggleDirection) -> bool {
        let c = self.table[0];
        let span = 2 * self.radius;
        self.table.iter().enumerate().all(|(n, &out)| {
            let extreme = match direction {
                ToggleDirection::Left => (n >> span) & 1,
                ToggleDirection::Right => n & 1,
            } as u8;
            out == extreme ^ c
        })
    }

    /// Wolfram number for radius-1 rules.
    pub fn wolfram_number(&self) -> Option<u8> {
        (self.radius == 1).then(|| {
            self.table
                .iter()
                .enumerate()
                .fold(0u8, |acc, (n, &b)| acc | (b << n))
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(number) = self.wolfram_number() {
            write!(f, "{number} {{")?;
        } else {
            write!(f, "r{} {{", self.radius)?;
        }
        for &b in &self.table {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rule({self}, toggle={:?})", self.toggle)
    }
}

pub(crate) fn check_radius(radius: usize) -> Result<()> {
    if radius == 0 || radius > MAX_RADIUS {
        return Err(HcaError::InvalidConfig(format!(
            "radius must be in 1..={MAX_RADIUS}, got {radius}"
        )));
    }
    Ok(())
}

fn table_is_toggle(radius: usize, table: &[u8], direction: ToggleDirection) -> bool {
    let half = 1usize << (2 * radius);
    match direction {
        ToggleDirection::Left => (0..half).all(|n| table[n] != table[n + half]),
        ToggleDirection::Right => (0..half).all(|i| table[2 * i] != table[2 * i + 1]),
    }
}
