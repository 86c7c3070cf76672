use dfrc_core::array::maximal_spread_angle;
use dfrc_core::dictionary::{build_regularized_dictionary, greedy_maxmin_dictionary, permute_augment};
use dfrc_core::signaling::SchemeConfig;
use dfrc_core::sim::{run_angle_robustness, ChannelModel, SimOptions};
use dfrc_core::{ArrayGeometry, ReceiveArray};
use std::time::Instant;

fn main() {
    let _ = ReceiveArray::ula(10, 0.5);
    let g = ArrayGeometry::new(16, 0.25).unwrap();
    let theta = maximal_spread_angle(&g).unwrap();
    let t = Instant::now();
    let dp = permute_augment(&greedy_maxmin_dictionary(16, 8, 256).unwrap()).unwrap();
    println!("D_p built in {:.1?}", t.elapsed());
    let hybrid = SchemeConfig::with_rotation(g, theta, dp, Some(8), 10_000.0).unwrap();
    let regularized = SchemeConfig::with_rotation(g, theta, build_regularized_dictionary(8).unwrap(), Some(8), 10_000.0).unwrap();
    let channel = ChannelModel::for_snr_db(10.0);
    let opts = SimOptions::default();
    for sigma in [1.0, 3.0, 5.0] {
        let h = run_angle_robustness(&hybrid, &[sigma], 500, 200, &channel, 0xA11, &opts).unwrap();
        let r = run_angle_robustness(&regularized, &[sigma], 500, 200, &channel, 0xA11, &opts).unwrap();
        println!("sigma {sigma}: hybrid SER {:.4}  regularized SER {:.4}", h.points[0].ser(), r.points[0].ser());
    }
}
