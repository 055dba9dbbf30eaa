use std::collections::BTreeMap;
use std::time::Instant;


use brauer_dn::nf;
use brauer_dn::word;
use brauer_dn::BmwCtx;

fn main() {
    let n = 4u8;
    let ctx = BmwCtx::for_rank(n).unwrap();
    let keys = ctx.engine().all_keys();
    let gens: Vec<u8> = (1..=n).flat_map(|i| [word::r(i), word::e(i)]).collect();
    let mut by_label: BTreeMap<String, (usize, f64)> = BTreeMap::new();
    let mut slow: Vec<(f64, String)> = Vec::new();
    let t_all = Instant::now();
    for (done, key) in keys.iter().enumerate() {
        let t = Instant::now();
        for &x in &gens {
            ctx.gen_mul(x, key, true).unwrap();
            ctx.gen_mul(x, &key.op(), false).unwrap();
        }
        let dt = t.elapsed().as_secs_f64();
        let e = by_label.entry(format!("{:?}", key.label)).or_default();
        e.0 += 1;
        e.1 += dt;
        if dt > 0.4 {
            let w = nf::nf_word(ctx.engine().tab(), key);
            slow.push((dt, format!("{:?} len={}", key, w.syms.len())));
            println!("slow {:7.2}s  {:?} len={}", dt, key, w.syms.len());
        }
        if done % 100 == 0 {
            println!(
                "... {}/{} keys, {:.1}s elapsed",
                done,
                keys.len(),
                t_all.elapsed().as_secs_f64()
            );
        }
    }
    println!("total {:.1}s", t_all.elapsed().as_secs_f64());
    for (label, (cnt, secs)) in &by_label {
        println!(
            "{label}: {cnt} keys, {secs:.1} s total, {:.2} ms/key",
            1e3 * secs / *cnt as f64
        );
    }
    slow.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    for (dt, desc) in slow.iter().take(12) {
        println!("worst {:7.2}s  {desc}", dt);
    }
}
