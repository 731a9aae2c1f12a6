//! Conjugate-gradient nodal solve. Pads are Dirichlet nodes (VDD net fixed
//! at Vop, VSS net at 0); each rail net solves independently on its reduced
//! Laplacian, which is symmetric positive definite once every floating
//! component is excluded. Per-instance voltage drop sums the VDD-side and
//! VSS-side drops; the effective instance voltage is Vop minus that drop.

use crate::irsolve::loads::CurrentLoads;
use crate::pdnet::{Rail, ResistiveNetwork};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct IrResult {
    pub vop_v: f64,
    /// Voltage per network node, pads at their fixed values.
    pub node_voltage: Vec<f64>,
    /// Per original vertex: total drop (VDD dip plus VSS rise), volts.
    pub instance_vdrop: Vec<Option<f64>>,
    /// Per original vertex: Vop - vdrop.
    pub instance_eiv: Vec<Option<f64>>,
    /// Max nodal current imbalance over injected total (relative).
    pub kcl_residual: f64,
}

impl IrResult {
    /// CSV dump: `instance,vdrop_mV,eiv_V` (indices are vertex ids).
    pub fn to_csv(&self, names: &dyn Fn(usize) -> String) -> String {
        let mut out = String::from("instance,vdrop_mV,eiv_V\n");
        for (v, drop) in self.instance_vdrop.iter().enumerate() {
            if let (Some(d), Some(e)) = (drop, self.instance_eiv[v]) {
                out.push_str(&format!("{},{:.4},{:.6}\n", names(v), d * 1000.0, e));
            }
        }
        out
    }
}

struct Csr {
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    diag: Vec<f64>,
}

impl Csr {
    fn mul(&self, x: &[f64], out: &mut [f64]) {
        for i in 0..x.len() {
            let mut acc = self.diag[i] * x[i];
            for k in self.offsets[i]..self.offsets[i + 1] {
                acc -= self.vals[k] * x[self.cols[k]];
            }
            out[i] = acc;
        }
    }
}

fn cg(a: &Csr, b: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = b.len();
    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if bnorm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&a.diag).map(|(ri, d)| ri / d).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];
    for _ in 0..max_iter {
        a.mul(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            return Err(Error::Solve("matrix not positive definite".into()));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rnorm <= tol * bnorm {
            return Ok(x);
        }
        for i in 0..n {
            z[i] = r[i] / a.diag[i];
        }
        let rz2: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz2 / rz;
        rz = rz2;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::Solve(format!("CG did not converge within {max_iter} iterations")))
}

/// Solves one rail net with Dirichlet pads at `pad_v`, working in the drop
/// variable d = |v - pad_v| so the right-hand side carries only the load
/// currents (pad conductance terms cancel) and the residual tolerance
/// applies at the load scale. `injection_a[node]` is the current injected
/// INTO the node in amps (negative for draws).
fn solve_rail(
    net: &ResistiveNetwork,
    rail: Rail,
    pad_v: f64,
    injection_a: &[f64],
    voltages: &mut [f64],
) -> Result<()> {
    let n = net.n_nodes();
    let in_rail: Vec<bool> = net.node_rail.iter().map(|&r| r == rail).collect();
    let mut is_pad = vec![false; n];
    for &p in &net.pads {
        if in_rail[p] {
            is_pad[p] = true;
        }
    }
    // Reachability from pads: floating components carry no current (the
    // network validated instance connectivity) and rest at the pad voltage.
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(a, b, g) in &net.edges {
        if in_rail[a] {
            adj[a].push((b, g));
            adj[b].push((a, g));
        }
    }
    let mut reach = vec![false; n];
    let mut queue: Vec<usize> = net.pads.iter().copied().filter(|&p| in_rail[p]).collect();
    for &p in &queue {
        reach[p] = true;
    }
    while let Some(v) = queue.pop() {
        for &(u, _) in &adj[v] {
            if !reach[u] {
                reach[u] = true;
                queue.push(u);
            }
        }
    }

    let mut index = vec![usize::MAX; n];
    let mut unknowns = Vec::new();
    for v in 0..n {
        if in_rail[v] {
            if is_pad[v] || !reach[v] {
                voltages[v] = pad_v;
            } else {
                index[v] = unknowns.len();
                unknowns.push(v);
            }
        }
    }
    if unknowns.is_empty() {
        return Ok(());
    }

    let m = unknowns.len();
    let mut diag = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    for &(a, b, g) in &net.edges {
        if !in_rail[a] || !reach[a] || !reach[b] {
            continue;
        }
        let (ia, ib) = (index[a], index[b]);
        match (ia != usize::MAX, ib != usize::MAX) {
            (true, true) => {
                diag[ia] += g;
                diag[ib] += g;
                rows[ia].push((ib, g));
                rows[ib].push((ia, g));
            }
            // Pad-adjacent edges only contribute to the diagonal in the
            // drop formulation (the pad sits at drop zero).
            (true, false) => diag[ia] += g,
            (false, true) => diag[ib] += g,
            (false, false) => {}
        }
    }
    // A * d = s with s the draw magnitude: on VDD nets the drop grows where
    // current leaves (injection negative), on VSS where it returns
    // (injection positive).
    for (i, &v) in unknowns.iter().enumerate() {
        rhs[i] = match rail {
            Rail::Vdd => -injection_a[v],
            Rail::Vss => injection_a[v],
        };
    }

    let mut offsets = Vec::with_capacity(m + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    offsets.push(0);
    for r in &rows {
        for &(c, g) in r {
            cols.push(c);
            vals.push(g);
        }
        offsets.push(cols.len());
    }
    let a = Csr { offsets, cols, vals, diag };
    let x = cg(&a, &rhs, 1e-12, 200_000)?;
    for (i, &v) in unknowns.iter().enumerate() {
        voltages[v] = match rail {
            Rail::Vdd => pad_v - x[i],
            Rail::Vss => pad_v + x[i],
        };
    }
    Ok(())
}

/// Solves the network under the given loads. VDD pads sit at `vop_v`, VSS
/// pads at 0; instances draw from their VDD node and return through their
/// VSS node.
pub fn solve_ir(net: &ResistiveNetwork, loads: &CurrentLoads, vop_v: f64) -> Result<IrResult> {
    let n = net.n_nodes();
    if net.pads.is_empty() {
        return Err(Error::Solve("network has no pads".into()));
    }
    let mut injection = vec![0.0f64; n];
    for (v, nodes) in net.instance_nodes.iter().enumerate() {
        if let Some((vdd, vss)) = nodes {
            let amps = loads.ma.get(v).copied().unwrap_or(0.0) / 1000.0;
            injection[*vdd] -= amps;
            injection[*vss] += amps;
        }
    }
    let mut voltages = vec![0.0f64; n];
    solve_rail(net, Rail::Vdd, vop_v, &injection, &mut voltages)?;
    solve_rail(net, Rail::Vss, 0.0, &injection, &mut voltages)?;

    // KCL audit at every non-pad node.
    let mut imbalance = injection.clone();
    for &(a, b, g) in &net.edges {
        let flow = g * (voltages[a] - voltages[b]);
        imbalance[a] -= flow;
        imbalance[b] += flow;
    }
    let mut is_pad = vec![false; n];
    for &p in &net.pads {
        is_pad[p] = true;
    }
    let worst = imbalance
        .iter()
        .enumerate()
        .filter(|(i, _)| !is_pad[*i])
        .map(|(_, v)| v.abs())
        .fold(0.0f64, f64::max);
    let total_a = (loads.total_ma / 1000.0).abs();
    let kcl_residual = if total_a > 0.0 { worst / total_a } else { worst };

    let mut vdrop = vec![None; net.instance_nodes.len()];
    let mut eiv = vec![None; net.instance_nodes.len()];
    for (v, nodes) in net.instance_nodes.iter().enumerate() {
        if let Some((vdd, vss)) = nodes {
            let d = (vop_v - voltages[*vdd]) + voltages[*vss];
            vdrop[v] = Some(d);
            eiv[v] = Some(vop_v - d);
        }
    }
    Ok(IrResult {
        vop_v,
        node_voltage: voltages,
        instance_vdrop: vdrop,
        instance_eiv: eiv,
        kcl_residual,
    })
}

/// Low-tail nearest-rank quantile of the effective instance voltage: the
/// value at ascending rank ceil((1-q) * N), bounding the worst (1-q) tail.
pub fn eiv_percentile(res: &IrResult, q: f64) -> Result<f64> {
    let mut values: Vec<f64> = res.instance_eiv.iter().filter_map(|e| *e).collect();
    if values.is_empty() {
        return Err(Error::Solve("no instances in the IR result".into()));
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rank = (((1.0 - q) * values.len() as f64).ceil() as usize).max(1);
    Ok(values[rank - 1])
}

/// The IR validity criterion: the 99.7th-percentile effective instance
/// voltage must exceed 80% of the operating voltage. The picovolt guard
/// keeps the strict inequality stable against decimal-to-binary rounding
/// (0.56 vs 0.8 * 0.7 must compare equal).
pub fn ir_valid(eiv_p997: f64, vop_v: f64) -> bool {
    eiv_p997 > 0.8 * vop_v + 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irsolve::loads::CurrentLoads;
    use crate::pdnet::{Rail, ResistiveNetwork};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Single rail of length n_taps segments with a pad at the left end.
    fn ladder(n_taps: usize, seg_ohm: f64, tap_ma: f64) -> (ResistiveNetwork, CurrentLoads) {
        let mut net = ResistiveNetwork::new(n_taps);
        let vdd_pad = net.add_node(Rail::Vdd);
        net.mark_pad(vdd_pad);
        let vss_pad = net.add_node(Rail::Vss);
        net.mark_pad(vss_pad);
        let mut prev_v = vdd_pad;
        let mut prev_s = vss_pad;
        let mut ma = vec![0.0; n_taps];
        for t in 0..n_taps {
            let nv = net.add_node(Rail::Vdd);
            let ns = net.add_node(Rail::Vss);
            net.add_resistor(prev_v, nv, seg_ohm).unwrap();
            net.add_resistor(prev_s, ns, seg_ohm).unwrap();
            net.attach_instance(t, nv, ns);
            ma[t] = tap_ma;
            prev_v = nv;
            prev_s = ns;
        }
        let total = tap_ma * n_taps as f64;
        (net, CurrentLoads { ma, total_ma: total })
    }

    #[test]
    fn ladder_matches_closed_form() {
        let (n_taps, seg_ohm, tap_ma) = (40usize, 0.8, 0.5);
        let (net, loads) = ladder(n_taps, seg_ohm, tap_ma);
        let res = solve_ir(&net, &loads, 0.7).unwrap();
        // Drop at tap j (1-based): I*r*sum_{m=1..j} (N-m+1), doubled for the
        // matching VSS-side ladder.
        let amps = tap_ma / 1000.0;
        for j in 1..=n_taps {
            let mut sum = 0.0;
            for m in 1..=j {
                sum += (n_taps - m + 1) as f64;
            }
            let expect = 2.0 * amps * seg_ohm * sum;
            let got = res.instance_vdrop[j - 1].unwrap();
            assert!(
                (got - expect).abs() <= 1e-6 * expect.abs().max(1e-12),
                "tap {j}: {got} vs {expect}"
            );
        }
        assert!(res.kcl_residual < 1e-9);
    }

    #[test]
    fn zero_loads_zero_drop() {
        let (net, loads) = ladder(10, 1.0, 0.4);
        let zero = loads.scaled(0.0);
        let res = solve_ir(&net, &zero, 0.7).unwrap();
        for d in res.instance_vdrop.iter().flatten() {
            assert!(d.abs() < 1e-12);
        }
    }

    #[test]
    fn doubling_conductance_halves_drop() {
        let (net, loads) = ladder(10, 1.0, 0.4);
        let mut net2 = net.clone();
        for e in &mut net2.edges {
            e.2 *= 2.0;
        }
        let a = solve_ir(&net, &loads, 0.7).unwrap();
        let b = solve_ir(&net2, &loads, 0.7).unwrap();
        for (da, db) in a.instance_vdrop.iter().zip(&b.instance_vdrop) {
            let (da, db) = (da.unwrap(), db.unwrap());
            assert!((da - 2.0 * db).abs() < 1e-9 * da.abs().max(1e-12));
        }
    }

    fn random_network(rng: &mut ChaCha8Rng, n_inst: usize) -> (ResistiveNetwork, CurrentLoads) {
        let mut net = ResistiveNetwork::new(n_inst);
        let per_rail = n_inst + rng.gen_range(2..30);
        let mut nodes = [Vec::new(), Vec::new()];
        for (ri, rail) in [Rail::Vdd, Rail::Vss].into_iter().enumerate() {
            for i in 0..per_rail {
                let n = net.add_node(rail);
                nodes[ri].push(n);
                if i == 0 {
                    net.mark_pad(n);
                } else {
                    // Tree edge keeps the component connected to the pad.
                    let j = rng.gen_range(0..i);
                    net.add_resistor(nodes[ri][j], n, rng.gen_range(0.05..5.0)).unwrap();
                }
            }
            // Extra pads and cross links.
            for _ in 0..rng.gen_range(0..4) {
                let n = nodes[ri][rng.gen_range(0..per_rail)];
                net.mark_pad(n);
            }
            for _ in 0..per_rail / 2 {
                let a = nodes[ri][rng.gen_range(0..per_rail)];
                let b = nodes[ri][rng.gen_range(0..per_rail)];
                if a != b {
                    net.add_resistor(a, b, rng.gen_range(0.05..5.0)).unwrap();
                }
            }
        }
        let mut ma = vec![0.0; n_inst];
        let mut total = 0.0;
        for v in 0..n_inst {
            net.attach_instance(v, nodes[0][1 + v], nodes[1][1 + v]);
            ma[v] = rng.gen_range(0.0..2.0);
            total += ma[v];
        }
        (net, CurrentLoads { ma, total_ma: total })
    }

    #[test]
    fn superposition_on_random_networks() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..25 {
            let n_inst = rng.gen_range(3..40);
            let (net, la) = random_network(&mut rng, n_inst);
            let lb = CurrentLoads {
                ma: la.ma.iter().map(|i| i * 0.3 + 0.1).collect(),
                total_ma: la.ma.iter().map(|i| i * 0.3 + 0.1).sum(),
            };
            let ra = solve_ir(&net, &la, 0.7).unwrap();
            let rb = solve_ir(&net, &lb, 0.7).unwrap();
            let rab = solve_ir(&net, &la.add(&lb), 0.7).unwrap();
            for v in 0..n_inst {
                let sum = ra.instance_vdrop[v].unwrap() + rb.instance_vdrop[v].unwrap();
                let joint = rab.instance_vdrop[v].unwrap();
                assert!(
                    (sum - joint).abs() < 1e-8 * joint.abs().max(1e-9),
                    "superposition broke: {sum} vs {joint}"
                );
            }
            assert!(ra.kcl_residual < 1e-9);
        }
    }

    #[test]
    fn percentile_nearest_rank_cases() {
        let mk = |values: Vec<f64>| IrResult {
            vop_v: 0.7,
            node_voltage: vec![],
            instance_vdrop: values.iter().map(|v| Some(0.7 - v)).collect(),
            instance_eiv: values.into_iter().map(Some).collect(),
            kcl_residual: 0.0,
        };
        // Constant distribution: the percentile is that constant.
        let res = mk(vec![0.68; 100]);
        let p = eiv_percentile(&res, 0.997).unwrap();
        assert_eq!(p, 0.68);
        assert!(ir_valid(p, 0.7));

        // 1000 instances, one deep outlier: rank ceil(0.003*1000)=3 lands on
        // the 0.69 band boundary.
        let mut v = vec![0.69; 999];
        v.push(0.3);
        let res = mk(v);
        let p = eiv_percentile(&res, 0.997).unwrap();
        assert_eq!(p, 0.69);

        // Threshold arithmetic: 0.55 is not > 0.56.
        assert!(!ir_valid(0.55, 0.7));
        assert!(!ir_valid(0.56, 0.7));
        assert!(ir_valid(0.5601, 0.7));
    }

    #[test]
    fn extra_pad_never_hurts() {
        let (net, loads) = ladder(12, 1.0, 0.5);
        let a = solve_ir(&net, &loads, 0.7).unwrap();
        let mut net2 = net.clone();
        // Pad at the far end of the VDD rail too.
        let far_vdd = net2.instance_nodes[11].unwrap().0;
        net2.mark_pad(far_vdd);
        let b = solve_ir(&net2, &loads, 0.7).unwrap();
        for (da, db) in a.instance_vdrop.iter().zip(&b.instance_vdrop) {
            assert!(db.unwrap() <= da.unwrap() + 1e-12);
        }
    }
}
