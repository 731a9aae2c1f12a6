// probe: measured-vs-requested over a randomized feasible envelope
use pathkit::angen::generate_netlist;
use pathkit::netcore::{extract_topo_params, LibPreset, TopoParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let (lib, _) = LibPreset::Lib2.load();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut fails = 0;
    let mut errs = 0;
    let mut worst = (0.0f64, String::new());
    for seed in 0..150u64 {
        let n_inst: u32 = rng.gen_range(300..2500);
        let d = rng.gen_range(2.0..2.55);
        let t: f64 = rng.gen_range(3.6..12.0);
        let s = rng.gen_range(0.02..0.45);
        let b = rng.gen_range(0.05..1.0);
        let n_prim = rng.gen_range(10..120);
        // joint feasibility: enough comb cells for the level tower
        let n_comb = (n_inst as f64 * (1.0 - s)).floor();
        let lmax = (1.5 * t).ceil() + 2.0;
        if n_comb < 3.0 * lmax { continue; }
        let p = TopoParams::new(n_inst, n_prim, d, b, t, s);
        match generate_netlist(&p, &lib, seed) {
            Err(e) => { errs += 1; println!("seed {seed}: ERR {e} (d={d:.2},t={t:.1},s={s:.2},n={n_inst})"); }
            Ok(h) => {
                let m = extract_topo_params(&h, None).unwrap();
                let rn = (m.n_inst as f64 - n_inst as f64).abs() / n_inst as f64;
                let rt = (m.t_avg - t).abs() / t;
                let rd = (m.d_avg - d).abs() / d;
                let rs = (m.s_ratio - s).abs();
                let ok = m.n_prim == p.n_prim && rn <= 0.10 && rt <= 0.20 && rd <= 0.10 && rs <= 0.05;
                if !ok {
                    fails += 1;
                    println!("seed {seed}: FAIL req(d={d:.2},t={t:.1},s={s:.2},n={n_inst}) got(d={:.3},t={:.2},s={:.3},n={})", m.d_avg, m.t_avg, m.s_ratio, m.n_inst);
                }
                let w = rt.max(rd).max(rn);
                if w > worst.0 { worst = (w, format!("seed{seed} d={d:.2} t={t:.1} s={s:.2}")); }
            }
        }
    }
    println!("fails={fails} errs={errs} worst={:?}", worst);
}
