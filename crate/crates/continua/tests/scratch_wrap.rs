//! Scratch diagnostics (deleted before finalizing).

use std::time::Instant;

use continua::chain::circle_wrap;
use continua::checkers::{classify_circle, composite_status};
use continua::rat::{int, rat};
use continua::tendril::Sigma3Params;
use continua::wtable::UTable;
use continua::{FiniteNet, Presentation, Resolution, SparsePoint};

fn square(d: i64) -> Presentation {
    let mut pts: Vec<SparsePoint> = Vec::new();
    let mut push = |p: SparsePoint| {
        if !pts.contains(&p) {
            pts.push(p);
        }
    };
    for k in 0..=d {
        push(SparsePoint::from_pairs([(0u32, rat(k, d))]));
    }
    for k in 0..=d {
        push(SparsePoint::from_pairs([(0u32, int(1)), (1u32, rat(k, d))]));
    }
    for k in 0..=d {
        push(SparsePoint::from_pairs([(0u32, rat(k, d)), (1u32, int(1))]));
    }
    for k in 0..=d {
        push(SparsePoint::from_pairs([(1u32, rat(k, d))]));
    }
    Presentation::new("square", pts).unwrap()
}

fn res_square() -> Resolution {
    Resolution {
        n_points: 200,
        eps_grid: vec![rat(1, 8), rat(3, 32)],
        delta_grid: vec![rat(1, 4), rat(1, 32)],
        max_path_len: 256,
        tuple_budget: 700_000,
    }
}

#[test]
fn derive_square_battery() {
    let pres = square(16);
    println!("square: {} points", pres.len());
    let net = FiniteNet::from_presentation(&pres, pres.len(), 0).unwrap();
    let t0 = Instant::now();
    let verdicts = classify_circle(&net, &res_square()).unwrap();
    for v in &verdicts {
        println!("  {:?}: {:?} {:?}", v.checker, v.status, v.witness);
    }
    println!("composite {:?} ({:?})", composite_status(&verdicts), t0.elapsed());
}

#[test]
fn derive_arc_257() {
    use continua::checkers::classify_arc;
    let xs: Vec<SparsePoint> = (0..=256)
        .map(|k| SparsePoint::from_pairs([(0u32, rat(k, 256))]))
        .collect();
    let pres = Presentation::new("dyadic arc", xs).unwrap();
    let net = FiniteNet::from_presentation(&pres, 257, 0).unwrap();
    let res = Resolution {
        n_points: 257,
        eps_grid: vec![rat(1, 8), rat(1, 32)],
        delta_grid: vec![rat(1, 8), rat(1, 32)],
        max_path_len: 256,
        tuple_budget: 3_000_000,
    };
    let t0 = Instant::now();
    let verdicts = classify_arc(&net, &res).unwrap();
    for v in &verdicts {
        let w = format!("{:?}", v.witness);
        let w = if w.len() > 120 { format!("{}…", &w[..120]) } else { w };
        println!("  {:?}: {:?} {}", v.checker, v.status, w);
    }
    println!("arc composite {:?} ({:?})", composite_status(&verdicts), t0.elapsed());
}

#[test]
fn derive_circle_64() {
    let n = 64usize;
    let step = rat(1, 64);
    let dist = |i: usize, j: usize| {
        let s = i.abs_diff(j).min(n - i.abs_diff(j));
        int(s as i64) * &step
    };
    let points: Vec<SparsePoint> = (0..n)
        .map(|i| SparsePoint::from_pairs((0..n).map(|j| (j as u32, dist(i, j)))))
        .collect();
    let pres = Presentation::new("circle64", points).unwrap();
    let net = FiniteNet::from_presentation(&pres, n, 0).unwrap();
    let res = Resolution {
        n_points: 64,
        eps_grid: vec![rat(1, 16), rat(1, 32)],
        delta_grid: vec![rat(1, 16), rat(1, 128)],
        max_path_len: 256,
        tuple_budget: 700_000,
    };
    let t0 = Instant::now();
    let verdicts = classify_circle(&net, &res).unwrap();
    for v in &verdicts {
        let w = format!("{:?}", v.witness);
        let w = if w.len() > 120 { format!("{}…", &w[..120]) } else { w };
        println!("  {:?}: {:?} {}", v.checker, v.status, w);
    }
    println!("circle composite {:?} ({:?})", composite_status(&verdicts), t0.elapsed());
}

#[test]
fn derive_criterion3_fails() {
    use continua::checkers::{check_circ, check_ord};
    // Circle → ord fails.
    let n = 64usize;
    let step = rat(1, 64);
    let dist = |i: usize, j: usize| {
        let s = i.abs_diff(j).min(n - i.abs_diff(j));
        int(s as i64) * &step
    };
    let points: Vec<SparsePoint> = (0..n)
        .map(|i| SparsePoint::from_pairs((0..n).map(|j| (j as u32, dist(i, j)))))
        .collect();
    let circle = Presentation::new("circle64", points).unwrap();
    let circle_net = FiniteNet::from_presentation(&circle, n, 0).unwrap();
    let res = Resolution {
        n_points: 257,
        eps_grid: vec![rat(1, 16), rat(1, 32)],
        delta_grid: vec![rat(1, 16), rat(1, 128)],
        max_path_len: 256,
        tuple_budget: 3_000_000,
    };
    let v = check_ord(&circle_net, &res).unwrap();
    let w = format!("{:?}", v.witness);
    let w = if w.len() > 400 { format!("{}…", &w[..400]) } else { w };
    println!("circle ord: {:?} {}", v.status, w);

    // Line → circ fails.
    let xs: Vec<SparsePoint> = (0..=256)
        .map(|k| SparsePoint::from_pairs([(0u32, rat(k, 256))]))
        .collect();
    let line = Presentation::new("dyadic arc", xs).unwrap();
    let line_net = FiniteNet::from_presentation(&line, 257, 0).unwrap();
    let res2 = Resolution {
        n_points: 257,
        eps_grid: vec![rat(1, 8), rat(1, 32)],
        delta_grid: vec![rat(1, 8), rat(1, 32)],
        max_path_len: 256,
        tuple_budget: 3_000_000,
    };
    let v2 = check_circ(&line_net, &res2).unwrap();
    let w2 = format!("{:?}", v2.witness);
    let w2 = if w2.len() > 400 { format!("{}…", &w2[..400]) } else { w2 };
    println!("line circ: {:?} {}", v2.status, w2);
}

#[test]
fn derive_wrap_battery() {
    let params = Sigma3Params::default();
    let wrap = circle_wrap(&UTable::new(), 2, 1, &params, 16).unwrap();
    println!("wrap m=2 s=1: {} points", wrap.len());
    let net = FiniteNet::from_presentation(&wrap, wrap.len(), 0).unwrap();
    let t0 = Instant::now();
    let mut r = res_square();
    r.tuple_budget = 5_000_000;
    let verdicts = classify_circle(&net, &r).unwrap();
    for v in &verdicts {
        let w = format!("{:?}", v.witness);
        let w = if w.len() > 160 { format!("{}…", &w[..160]) } else { w };
        println!("  {:?}: {:?} {}", v.checker, v.status, w);
    }
    println!("composite {:?} ({:?})", composite_status(&verdicts), t0.elapsed());
}
