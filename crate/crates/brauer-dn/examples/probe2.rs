use std::time::Instant;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use brauer_dn::BmwCtx;

fn main() {
    let ctx = BmwCtx::for_rank(4).unwrap();
    let keys = ctx.engine().all_keys();
    let mut rng = StdRng::seed_from_u64(5);
    let t = Instant::now();
    let mut worst = 0.0f64;
    for i in 0..100 {
        let a = &keys[rng.gen_range(0..keys.len())];
        let b = &keys[rng.gen_range(0..keys.len())];
        let t1 = Instant::now();
        let el = ctx.key_mul(a, b).unwrap();
        let dt = t1.elapsed().as_secs_f64();
        if dt > worst { worst = dt; }
        if dt > 2.0 { println!("slow pair {i}: {:.1}s terms={}", dt, el.num_terms()); }
    }
    println!("100 pairs in {:.1}s, worst {:.2}s", t.elapsed().as_secs_f64(), worst);
}
