//! Relation tables: for each cone, one bit per cone across all fans
//! recording whether their intersection can be nonempty.
//!
//! A zero bit is a certificate of emptiness; a one bit promises nothing.
//! Tables of intersected cones AND together: the intersection is contained
//! in both inputs, so any pair empty for either input is empty for it too.
//! Tables are immutable once built and cheap to copy, which lets every
//! enumeration task own its table without synchronization.

use std::ops::Range;
use std::sync::Arc;

use crate::bits::BitSet;
use crate::{Error, Result};

/// Packed positions of each fan's block of bits. Fixed for a whole run so
/// every table indexes identically.
#[derive(Debug, PartialEq, Eq)]
pub struct TableLayout {
    offsets: Vec<usize>,
    sizes: Vec<usize>,
    total: usize,
}

impl TableLayout {
    pub fn new(fan_sizes: &[usize]) -> TableLayout {
        let mut offsets = Vec::with_capacity(fan_sizes.len());
        let mut total = 0;
        for &s in fan_sizes {
            offsets.push(total);
            total += s;
        }
        TableLayout {
            offsets,
            sizes: fan_sizes.to_vec(),
            total,
        }
    }

    pub fn fan_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn fan_size(&self, fan: usize) -> usize {
        self.sizes[fan]
    }

    pub fn total_bits(&self) -> usize {
        self.total
    }

    pub fn bit(&self, fan: usize, cone: usize) -> usize {
        debug_assert!(cone < self.sizes[fan]);
        self.offsets[fan] + cone
    }

    pub fn block(&self, fan: usize) -> Range<usize> {
        self.offsets[fan]..self.offsets[fan] + self.sizes[fan]
    }
}

/// One cone's bit array over all cones of all fans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTable {
    layout: Arc<TableLayout>,
    bits: BitSet,
}

impl RelationTable {
    /// The root table: every pair possible. Used for the full space, whose
    /// intersection with any cone is that cone.
    pub fn all_ones(layout: Arc<TableLayout>) -> RelationTable {
        let bits = BitSet::ones(layout.total_bits());
        RelationTable { layout, bits }
    }

    pub fn all_zeros(layout: Arc<TableLayout>) -> RelationTable {
        let bits = BitSet::zeros(layout.total_bits());
        RelationTable { layout, bits }
    }

    /// Build from explicit bits, one per cone in layout order. Intended for
    /// tests that pin exact bit patterns.
    pub fn from_bools(layout: Arc<TableLayout>, bits: &[bool]) -> RelationTable {
        assert_eq!(bits.len(), layout.total_bits());
        let mut t = RelationTable::all_zeros(layout);
        for (i, b) in bits.iter().enumerate() {
            if *b {
                t.bits.insert(i);
            }
        }
        t
    }

    pub fn layout(&self) -> &Arc<TableLayout> {
        &self.layout
    }

    pub fn get(&self, fan: usize, cone: usize) -> bool {
        self.bits.get(self.layout.bit(fan, cone))
    }

    pub fn set(&mut self, fan: usize, cone: usize) {
        self.bits.insert(self.layout.bit(fan, cone));
    }

    /// Number of possibly-intersecting cones in one fan's block.
    pub fn popcount_fan(&self, fan: usize) -> usize {
        let r = self.layout.block(fan);
        self.bits.count_range(r.start, r.end)
    }

    /// Pointwise AND, the table of an intersection of the two owners.
    pub fn and(&self, other: &RelationTable) -> Result<RelationTable> {
        if !Arc::ptr_eq(&self.layout, &other.layout) && self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        let mut bits = self.bits.clone();
        bits.and_assign(&other.bits);
        Ok(RelationTable {
            layout: Arc::clone(&self.layout),
            bits,
        })
    }
}

/// The initialized tables of a run: one per fan cone, plus the all-ones
/// root for the full space.
#[derive(Debug)]
pub struct FanTables {
    layout: Arc<TableLayout>,
    root: RelationTable,
    per_cone: Vec<Vec<RelationTable>>,
}

impl FanTables {
    /// All per-cone bits zero; filled by the table-initialization stage.
    pub fn empty(layout: Arc<TableLayout>) -> FanTables {
        let per_cone = (0..layout.fan_count())
            .map(|f| vec![RelationTable::all_zeros(Arc::clone(&layout)); layout.fan_size(f)])
            .collect();
        FanTables {
            root: RelationTable::all_ones(Arc::clone(&layout)),
            layout,
            per_cone,
        }
    }

    pub fn layout(&self) -> &Arc<TableLayout> {
        &self.layout
    }

    pub fn root(&self) -> &RelationTable {
        &self.root
    }

    pub fn table(&self, fan: usize, cone: usize) -> &RelationTable {
        &self.per_cone[fan][cone]
    }

    /// Record one nonempty directed pair: owner's bit for `other` is set.
    pub fn set_bit(&mut self, owner: (usize, usize), other: (usize, usize)) {
        debug_assert_ne!(owner.0, other.0, "own-fan bits stay zero");
        self.per_cone[owner.0][owner.1].set(other.0, other.1);
    }

    /// Record a nonempty unordered pair on both owners.
    pub fn set_pair(&mut self, a: (usize, usize), b: (usize, usize)) {
        self.set_bit(a, b);
        self.set_bit(b, a);
    }
}
