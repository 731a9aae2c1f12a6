//! Physical composition of a clustered cell: members in cluster order,
//! forced 1CPP padding where a non-integer M1/CPP gear ratio would leave the
//! next member off the even-site grid, and the remaining slack distributed
//! as whitespace in alignment-sized quanta (unpadded junctions first, then
//! the left end, the right end, and padded junctions; sub-quantum remainder
//! goes to the right end so member alignment is preserved).

use crate::netcore::TechProfile;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    /// Original vertex id occupying the span.
    Member(usize),
    Padding,
    Whitespace,
}

#[derive(Debug, Clone)]
pub struct ClusteredCellLayout {
    pub slots: Vec<(Slot, u32)>,
    pub total_width: u32,
}

impl ClusteredCellLayout {
    /// Offset of each member in CPP from the cluster's left edge.
    pub fn member_offsets(&self) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        let mut at = 0;
        for (slot, w) in &self.slots {
            if let Slot::Member(id) = slot {
                out.push((*id, at));
            }
            at += w;
        }
        out
    }
}

/// Alignment step in CPP sites: 2 when the M1/CPP gear ratio is non-integer,
/// 1 otherwise.
pub fn site_alignment(tech: &TechProfile) -> u32 {
    if tech.even_site_alignment() {
        2
    } else {
        1
    }
}

/// Composes one cluster. `members` are `(original vertex id, width)` in
/// cluster order; the layout always sums to exactly `w_max`. Errors when the
/// members plus forced padding exceed `w_max` (the caller must re-pack the
/// cluster with padded widths).
pub fn compose_clustered_cell(
    members: &[(usize, u32)],
    tech: &TechProfile,
    w_max: u32,
) -> Result<ClusteredCellLayout> {
    if members.is_empty() {
        return Err(Error::Netlist("empty cluster".into()));
    }
    let align = site_alignment(tech);
    let m = members.len();

    // Forced padding after member j so member j+1 starts on the alignment.
    let mut pads = vec![0u32; m.saturating_sub(1)];
    let mut cum = 0u32;
    for (j, &(_, w)) in members.iter().enumerate() {
        cum += w;
        if j + 1 < m {
            let pad = (align - cum % align) % align;
            pads[j] = pad;
            cum += pad;
        }
    }
    let used: u32 = cum;
    if used > w_max {
        return Err(Error::Netlist(format!(
            "cluster needs {used} CPP with padding, exceeds w_max {w_max}"
        )));
    }
    let slack = w_max - used;

    // Whitespace positions: 0 = left end, 1..m = after member j, m = right end.
    let mut ws = vec![0u32; m + 1];
    let mut priority: Vec<usize> = Vec::new();
    for j in 0..m.saturating_sub(1) {
        if pads[j] == 0 {
            priority.push(j + 1);
        }
    }
    priority.push(0);
    priority.push(m);
    for j in 0..m.saturating_sub(1) {
        if pads[j] > 0 {
            priority.push(j + 1);
        }
    }
    let quanta = slack / align;
    let base = quanta / priority.len() as u32;
    let extra = (quanta % priority.len() as u32) as usize;
    for (rank, &p) in priority.iter().enumerate() {
        ws[p] = (base + u32::from(rank < extra)) * align;
    }
    // Sub-alignment remainder keeps members aligned only at the right end.
    ws[m] += slack % align;

    let mut slots = Vec::new();
    if ws[0] > 0 {
        slots.push((Slot::Whitespace, ws[0]));
    }
    for (j, &(id, w)) in members.iter().enumerate() {
        slots.push((Slot::Member(id), w));
        if j + 1 < m {
            if pads[j] > 0 {
                slots.push((Slot::Padding, pads[j]));
            }
            if ws[j + 1] > 0 {
                slots.push((Slot::Whitespace, ws[j + 1]));
            }
        }
    }
    if ws[m] > 0 {
        slots.push((Slot::Whitespace, ws[m]));
    }
    let total: u32 = slots.iter().map(|(_, w)| w).sum();
    debug_assert_eq!(total, w_max);
    Ok(ClusteredCellLayout { slots, total_width: total })
}

/// Width of a member list once forced padding is accounted for; a cluster
/// with this effective width always composes.
pub fn padded_width(members: &[u32], align: u32) -> u32 {
    let mut cum = 0u32;
    for (j, &w) in members.iter().enumerate() {
        cum += w;
        if j + 1 < members.len() {
            cum += (align - cum % align) % align;
        }
    }
    cum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::LibPreset;

    fn tech_30_45() -> TechProfile {
        LibPreset::Lib2.load().1
    }

    fn tech_integer_ratio() -> TechProfile {
        let mut t = tech_30_45();
        t.m1p_nm = 45.0; // integer gear ratio
        t
    }

    #[test]
    fn odd_member_forces_padding() {
        // NAND (3CPP) then AND (4CPP) in a 12CPP cluster: 1CPP pad after the
        // odd member, 4CPP whitespace split across the two ends.
        let layout =
            compose_clustered_cell(&[(0, 3), (1, 4)], &tech_30_45(), 12).unwrap();
        assert_eq!(layout.total_width, 12);
        assert_eq!(
            layout.slots,
            vec![
                (Slot::Whitespace, 2),
                (Slot::Member(0), 3),
                (Slot::Padding, 1),
                (Slot::Member(1), 4),
                (Slot::Whitespace, 2),
            ]
        );
        for (_, off) in layout.member_offsets() {
            assert_eq!(off % 2, 0);
        }
    }

    #[test]
    fn exact_fit_has_no_filler() {
        let layout = compose_clustered_cell(&[(0, 12)], &tech_30_45(), 12).unwrap();
        assert_eq!(layout.slots, vec![(Slot::Member(0), 12)]);
    }

    #[test]
    fn integer_ratio_distributes_at_junctions() {
        let layout =
            compose_clustered_cell(&[(0, 2), (1, 2), (2, 2)], &tech_integer_ratio(), 8).unwrap();
        assert_eq!(layout.total_width, 8);
        assert!(layout.slots.iter().all(|(s, _)| !matches!(s, Slot::Padding)));
        let ws: u32 = layout
            .slots
            .iter()
            .filter(|(s, _)| matches!(s, Slot::Whitespace))
            .map(|(_, w)| w)
            .sum();
        assert_eq!(ws, 2);
        // Unpadded junctions get the whitespace first.
        assert_eq!(
            layout.slots,
            vec![
                (Slot::Member(0), 2),
                (Slot::Whitespace, 1),
                (Slot::Member(1), 2),
                (Slot::Whitespace, 1),
                (Slot::Member(2), 2),
            ]
        );
    }

    #[test]
    fn overfull_after_padding_rejected() {
        // 3+1+3+1+3+1+3 = 15 > 12.
        let r = compose_clustered_cell(&[(0, 3), (1, 3), (2, 3), (3, 3)], &tech_30_45(), 12);
        assert!(r.is_err());
        assert_eq!(padded_width(&[3, 3, 3, 3], 2), 15);
    }

    #[test]
    fn widths_always_sum_to_w_max() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let tech = tech_30_45();
        for _ in 0..500 {
            let n = rng.gen_range(1..=4);
            let ws: Vec<(usize, u32)> =
                (0..n).map(|i| (i, rng.gen_range(1..=4u32))).collect();
            let w_max = 16;
            if padded_width(&ws.iter().map(|&(_, w)| w).collect::<Vec<_>>(), 2) > w_max {
                continue;
            }
            let layout = compose_clustered_cell(&ws, &tech, w_max).unwrap();
            assert_eq!(layout.total_width, w_max);
            for (_, off) in layout.member_offsets() {
                assert_eq!(off % 2, 0, "misaligned member in {:?}", layout.slots);
            }
        }
    }
}
