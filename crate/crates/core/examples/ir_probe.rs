// probe: end-to-end PDN build + extraction + IR solve on a ~15um fixture,
// checking the backside-mitigation direction and timing.
use pathkit::angen::generate_netlist;
use pathkit::irsolve::{eiv_percentile, instance_currents, solve_ir};
use pathkit::netcore::{width_regularize_naive, LibPreset, TopoParams};
use pathkit::pdnet::{build_pdn, extract_resistive_network, PdnConfig, PdnKind, TapScheme};
use pathkit::physdes::place;
use std::time::Instant;

fn main() {
    let (lib, tech) = LibPreset::Lib2.load();
    let params = TopoParams::new(800, 32, 2.3, 0.5, 5.0, 0.1);
    let h = width_regularize_naive(&generate_netlist(&params, &lib, 1).unwrap(), &lib);
    let loads = instance_currents(&h, &lib, 5.0, 0.2, tech.vop_v).unwrap();
    println!("total load: {:.3} mA over {} cells", loads.total_ma, h.n_inst());

    for kind in [PdnKind::Fs, PdnKind::Fb, PdnKind::Bs, PdnKind::Bb] {
        let t0 = Instant::now();
        let cfg = if kind.needs_taps() {
            PdnConfig::new(kind, Some(48), Some(TapScheme::Column)).unwrap()
        } else {
            PdnConfig::new(kind, None, None).unwrap()
        };
        let (fp, taps) = pathkit::pdnet::floorplan_with_taps(h.n_inst(), 12, 0.7, &tech, &cfg).unwrap();
        let p = match place(&h, &fp, 12, 0.7, 1) {
            Ok(p) => p,
            Err(e) => { println!("{kind:?}: place failed: {e}"); continue; }
        };
        let mesh = build_pdn(&cfg, &fp, &tech, taps.as_ref()).unwrap();
        let net = match extract_resistive_network(&mesh, &h, &p, &cfg) {
            Ok(n) => n,
            Err(e) => { println!("{kind:?}: extract failed: {e}"); continue; }
        };
        let build_t = t0.elapsed();
        let t1 = Instant::now();
        match solve_ir(&net, &loads, tech.vop_v) {
            Ok(res) => {
                let worst = res.instance_vdrop.iter().flatten().cloned().fold(0.0f64, f64::max);
                let p997 = eiv_percentile(&res, 0.997).unwrap();
                println!("{kind:?}: nodes={} edges={} pads={} worst_drop={:.2}mV eiv997={:.4}V kcl={:.2e} build={:?} solve={:?}",
                    net.n_nodes(), net.edges.len(), net.pads.len(), worst*1e3, p997, res.kcl_residual, build_t, t1.elapsed());
            }
            Err(e) => println!("{kind:?}: solve failed: {e}"),
        }
    }
}
