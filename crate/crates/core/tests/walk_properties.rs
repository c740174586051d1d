use cube_times::walk::{coupled_step, hamming_distance, step, Configuration, NoiseStream, WalkKind, Walker};
use proptest::prelude::*;

fn spins(max_n: usize) -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 1..max_n)
}

proptest! {
    #[test]
    fn flip_is_an_involution(s in spins(200), i in any::<prop::sample::Index>()) {
        let c = Configuration::from_spins(&s).unwrap();
        let i = i.index(s.len());
        let once = c.flip_coordinate(i).unwrap();
        prop_assert_ne!(&once, &c);
        prop_assert_eq!(hamming_distance(&c, &once).unwrap(), 1);
        prop_assert_eq!(once.flip_coordinate(i).unwrap(), c);
    }

    #[test]
    fn spins_round_trip(s in spins(300)) {
        let c = Configuration::from_spins(&s).unwrap();
        prop_assert_eq!(c.spins(), s.clone());
        prop_assert_eq!(c.minus_count(), s.iter().filter(|&&x| x < 0).count());
    }

    #[test]
    fn equal_configurations_hash_equal(s in spins(150), path in prop::collection::vec(any::<prop::sample::Index>(), 0..40)) {
        use std::collections::hash_map::DefaultHasher;
        use std::hash::{Hash, Hasher};
        // reach the same vertex along a path and its doubled version
        let start = Configuration::from_spins(&s).unwrap();
        let mut a = start.clone();
        for p in &path {
            let i = p.index(s.len());
            a = a.flip_coordinate(i).unwrap().flip_coordinate(i).unwrap();
        }
        let h = |c: &Configuration| {
            let mut st = DefaultHasher::new();
            c.hash(&mut st);
            st.finish()
        };
        prop_assert_eq!(&a, &start);
        prop_assert_eq!(h(&a), h(&start));
    }

    #[test]
    fn hamming_is_a_metric(a in spins(100), seed in any::<u64>()) {
        let n = a.len();
        let x = Configuration::from_spins(&a).unwrap();
        let mut noise = NoiseStream::new(seed);
        let mut y = x.clone();
        let mut z = x.clone();
        for _ in 0..n {
            y.flip_in_place(noise.next_index(n)).unwrap();
            z.flip_in_place(noise.next_index(n)).unwrap();
        }
        let d = |p: &Configuration, q: &Configuration| hamming_distance(p, q).unwrap();
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
        prop_assert_eq!(d(&x, &x), 0);
    }

    #[test]
    fn coupling_is_monotone(n in 1usize..130, seed in any::<u64>(), steps in 1usize..400) {
        // the walks from + and - stay ordered and their distance never grows
        let mut plus = Configuration::all_plus(n).unwrap();
        let mut minus = Configuration::all_minus(n).unwrap();
        let mut noise = NoiseStream::new(seed);
        let mut distance = n;
        for _ in 0..steps {
            let s = noise.next_step(n);
            let (p, m) = coupled_step(&plus, &minus, s.index, s.uniform).unwrap();
            let next = hamming_distance(&p, &m).unwrap();
            prop_assert!(next <= distance);
            prop_assert!(distance - next <= 1);
            for i in 0..n {
                prop_assert!(p.spin(i).unwrap() >= m.spin(i).unwrap());
            }
            plus = p;
            minus = m;
            distance = next;
        }
    }

    #[test]
    fn flip_walk_parity(n in 1usize..100, seed in any::<u64>(), steps in 0u64..500) {
        let mut w = Walker::new(Configuration::all_plus(n).unwrap(), WalkKind::Flip, NoiseStream::new(seed));
        for _ in 0..steps {
            w.advance();
        }
        prop_assert_eq!(w.state().minus_count() as u64 % 2, steps % 2);
    }

    #[test]
    fn noise_is_counter_based(seed in any::<u64>(), n in 1usize..5000, t in 0u64..200) {
        let mut s = NoiseStream::new(seed);
        let mut last = None;
        for _ in 0..=t {
            last = Some(s.next_step(n));
        }
        let direct = NoiseStream::new(seed).step_at(t, n);
        prop_assert_eq!(last.unwrap(), direct);
        prop_assert!(direct.index < n);
        prop_assert!((0.0..1.0).contains(&direct.uniform));
    }

    #[test]
    fn walker_matches_step(n in 1usize..80, seed in any::<u64>(), heat in any::<bool>()) {
        let kind = if heat { WalkKind::HeatBath } else { WalkKind::Flip };
        let mut w = Walker::new(Configuration::all_plus(n).unwrap(), kind, NoiseStream::new(seed));
        let noise = NoiseStream::new(seed);
        let mut c = Configuration::all_plus(n).unwrap();
        for t in 0..100 {
            w.advance();
            let s = noise.step_at(t, n);
            c = step(&c, kind, s.index, s.uniform).unwrap();
            prop_assert_eq!(w.state(), &c);
        }
    }
}

#[test]
fn heat_bath_is_uniform_in_the_long_run() {
    // single coordinate marginal after many steps: P(+) ~ 1/2
    let n = 8;
    let runs = 4000;
    let mut plus = 0;
    for r in 0..runs {
        let mut w = Walker::new(Configuration::all_plus(n).unwrap(), WalkKind::HeatBath, NoiseStream::derived(3, "uniform", r));
        for _ in 0..200 {
            w.advance();
        }
        plus += usize::from(w.state().spin(0).unwrap() > 0);
    }
    let p = plus as f64 / runs as f64;
    assert!((p - 0.5).abs() < 4.0 * (0.25f64 / runs as f64).sqrt(), "p = {p}");
}
