//! Textual verdict reports: rendering, parsing, and witness replay.
//!
//! A report is a sequence of `verdict v1 … end` blocks, one per checker run.
//! Each block records the checker (with its arguments), the space it ran on,
//! the full resolution, and the witness, all in the canonical `num/den`
//! rational form — so emitted reports are byte-reproducible and
//! self-contained.
//!
//! [`replay`] re-evaluates a verdict against a net in two stages: first the
//! carried witness is verified structurally (paths really step below ε and
//! avoid the recorded balls, partitions really split, covers really cover,
//! separated families really separate), then the checker is re-run at the
//! recorded resolution and required to reproduce the verdict exactly. Either
//! stage failing is an error, never a silent downgrade.
//!
//! Verified behaviors:
//! - render → parse is the identity on every witness variant;
//! - replay reproduces the recorded status on untampered reports and rejects
//!   tampered evidence (altered distances, moved partition points, truncated
//!   paths);
//! - compactified verdicts replay against the base presentation by rebuilding
//!   the compactified net.

use num_traits::Zero;

use crate::checkers::btw::{outside_ball, testable_deltas};
use crate::checkers::{
    check_btw, check_circ, check_conn, check_cpct, check_lc, check_ndegen, check_ord,
};
use crate::error::{Error, Result};
use crate::line::{compactify, noncompact_verdict};
use crate::net::FiniteNet;
use crate::presentation::Presentation;
use crate::rat::{fmt_rat, int, parse_rat, Rat};
use crate::resolution::{
    ArrangementFail, CheckerKind, CircClauseFail, Resolution, SpaceRef, Status, Verdict, Witness,
};

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn rat_list(rs: &[Rat]) -> String {
    rs.iter().map(fmt_rat).collect::<Vec<_>>().join(" ")
}

fn idx_list(is: &[usize]) -> String {
    is.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn render_witness(w: &Witness, out: &mut String) {
    match w {
        Witness::None => out.push_str("w none\n"),
        Witness::Pair { i, j, dist } => {
            out.push_str(&format!("w pair {i} {j} {}\n", fmt_rat(dist)));
        }
        Witness::AllZero { n } => out.push_str(&format!("w all-zero {n}\n")),
        Witness::Covers { covers } => {
            out.push_str(&format!("w covers {}\n", covers.len()));
            for (eps, centers) in covers {
                out.push_str(&format!("w-cover {} : {}\n", fmt_rat(eps), idx_list(centers)));
            }
        }
        Witness::CoverBudget { eps, centers } => {
            out.push_str(&format!("w cover-budget {} : {}\n", fmt_rat(eps), idx_list(centers)));
        }
        Witness::Connected { per_eps } => {
            out.push_str(&format!("w connected {}\n", per_eps.len()));
            for (eps, count) in per_eps {
                out.push_str(&format!("w-count {} {count}\n", fmt_rat(eps)));
            }
        }
        Witness::ClusterSplit { eps, left, right } => {
            out.push_str(&format!("w cluster-split {}\n", fmt_rat(eps)));
            out.push_str(&format!("w-left {}\n", idx_list(left)));
            out.push_str(&format!("w-right {}\n", idx_list(right)));
        }
        Witness::Schedule { per_delta } => {
            out.push_str(&format!("w schedule {}\n", per_delta.len()));
            for (delta, dprime, eps) in per_delta {
                out.push_str(&format!(
                    "w-delta {} {} {}\n",
                    fmt_rat(delta),
                    fmt_rat(dprime),
                    fmt_rat(eps)
                ));
            }
        }
        Witness::AvoidingPath { delta, dprime, eps, path } => {
            out.push_str(&format!(
                "w avoiding-path {} {} {} : {}\n",
                fmt_rat(delta),
                fmt_rat(dprime),
                fmt_rat(eps),
                idx_list(path)
            ));
        }
        Witness::NoTestableDelta => out.push_str("w no-testable-delta\n"),
        Witness::TriplesScanned { count } => {
            out.push_str(&format!("w triples-scanned {count}\n"));
        }
        Witness::TripleFail { triple, fails } => {
            out.push_str(&format!(
                "w triple-fail {} {} {}\n",
                triple[0], triple[1], triple[2]
            ));
            for f in fails {
                out.push_str(&format!(
                    "w-arr {} {} {} {} : {}\n",
                    f.mid,
                    fmt_rat(&f.delta),
                    fmt_rat(&f.dprime),
                    fmt_rat(&f.eps),
                    idx_list(&f.path)
                ));
            }
        }
        Witness::TriplesUndecided { count, pending } => {
            out.push_str(&format!("w triples-undecided {count}\n"));
            if let Some([a, b, c]) = pending {
                out.push_str(&format!("w-pending {a} {b} {c}\n"));
            }
        }
        Witness::PairsScanned { count } => out.push_str(&format!("w pairs-scanned {count}\n")),
        Witness::LocalSplit { center, r, eps, eps_fine, a, b } => {
            out.push_str(&format!(
                "w local-split {center} {} {} {} {a} {b}\n",
                fmt_rat(r),
                fmt_rat(eps),
                fmt_rat(eps_fine)
            ));
        }
        Witness::PairsUndecided { count } => {
            out.push_str(&format!("w pairs-undecided {count}\n"));
        }
        Witness::TuplesScanned { count } => {
            out.push_str(&format!("w tuples-scanned {count}\n"));
        }
        Witness::TupleFail { tuple, fails } => {
            out.push_str(&format!(
                "w tuple-fail {} {} {} {}\n",
                tuple[0], tuple[1], tuple[2], tuple[3]
            ));
            for f in fails {
                let head = format!(
                    "w-clause {} {} {} {} {} {} {} {}",
                    f.order[0],
                    f.order[1],
                    f.order[2],
                    f.order[3],
                    f.clause,
                    f.position,
                    fmt_rat(&f.radius),
                    fmt_rat(&f.eps)
                );
                match &f.path {
                    None => out.push_str(&format!("{head}\n")),
                    Some(p) => out.push_str(&format!("{head} : {}\n", idx_list(p))),
                }
            }
        }
        Witness::TuplesUndecided { count } => {
            out.push_str(&format!("w tuples-undecided {count}\n"));
        }
    }
}

/// Render one verdict as a `verdict v1 … end` block.
pub fn render_verdict(v: &Verdict) -> String {
    let mut out = String::new();
    out.push_str("verdict v1\n");
    match v.checker {
        CheckerKind::Btw { x, y, z } => out.push_str(&format!("checker btw {x} {y} {z}\n")),
        k => out.push_str(&format!("checker {}\n", k.name())),
    }
    match v.space {
        SpaceRef::Base => out.push_str("space base\n"),
        SpaceRef::Compactified { base } => out.push_str(&format!("space compactified {base}\n")),
    }
    out.push_str(&format!("status {}\n", v.status.as_str()));
    out.push_str(&format!("points {}\n", v.resolution.n_points));
    out.push_str(&format!("net {}\n", v.net_len));
    for (key, grid) in [("eps", &v.resolution.eps_grid), ("delta", &v.resolution.delta_grid)] {
        if grid.is_empty() {
            out.push_str(&format!("{key}\n"));
        } else {
            out.push_str(&format!("{key} {}\n", rat_list(grid)));
        }
    }
    out.push_str(&format!("maxlen {}\n", v.resolution.max_path_len));
    out.push_str(&format!("budget {}\n", v.resolution.tuple_budget));
    render_witness(&v.witness, &mut out);
    out.push_str("end\n");
    out
}

/// Render a whole report: the verdict blocks in order, blank-line separated.
pub fn render_report(vs: &[Verdict]) -> String {
    vs.iter().map(render_verdict).collect::<Vec<_>>().join("\n")
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct BlockReader<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> BlockReader<'a> {
    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        let item = self.lines.get(self.pos).copied();
        self.pos += 1;
        item
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    /// Consume the next line, requiring its first token to be `key`; returns
    /// the line number and the remaining tokens.
    fn expect(&mut self, key: &str) -> Result<(usize, Vec<&'a str>)> {
        let (lineno, line) = self
            .next_line()
            .ok_or_else(|| Error::invalid(format!("verdict block ends before `{key}` line")))?;
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some(k) if k == key => Ok((lineno, tokens.collect())),
            Some(k) => Err(Error::parse(lineno, format!("expected `{key}` line, found `{k}`"))),
            None => Err(Error::parse(lineno, format!("expected `{key}` line, found blank"))),
        }
    }
}

fn parse_usize(lineno: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(lineno, format!("bad integer {tok:?}")))
}

fn parse_rat_at(lineno: usize, tok: &str) -> Result<Rat> {
    parse_rat(tok).map_err(|_| Error::parse(lineno, format!("bad rational {tok:?}")))
}

fn parse_idx_list(lineno: usize, toks: &[&str]) -> Result<Vec<usize>> {
    toks.iter().map(|t| parse_usize(lineno, t)).collect()
}

fn parse_rat_toks(lineno: usize, toks: &[&str]) -> Result<Vec<Rat>> {
    toks.iter().map(|t| parse_rat_at(lineno, t)).collect()
}

/// Split `toks` at the literal `:` separator.
fn split_colon<'a>(lineno: usize, toks: &[&'a str]) -> Result<(Vec<&'a str>, Vec<&'a str>)> {
    match toks.iter().position(|t| *t == ":") {
        Some(p) => Ok((toks[..p].to_vec(), toks[p + 1..].to_vec())),
        None => Err(Error::parse(lineno, "expected a `:` separator")),
    }
}

fn fixed<const N: usize>(lineno: usize, toks: &[&str]) -> Result<[usize; N]> {
    if toks.len() != N {
        return Err(Error::parse(lineno, format!("expected {N} fields, found {}", toks.len())));
    }
    let mut out = [0usize; N];
    for (slot, tok) in out.iter_mut().zip(toks) {
        *slot = parse_usize(lineno, tok)?;
    }
    Ok(out)
}

fn parse_witness(reader: &mut BlockReader) -> Result<Witness> {
    let (lineno, toks) = reader.expect("w")?;
    let tag = *toks
        .first()
        .ok_or_else(|| Error::parse(lineno, "witness line has no tag"))?;
    let args = &toks[1..];
    Ok(match tag {
        "none" => Witness::None,
        "pair" => {
            if args.len() != 3 {
                return Err(Error::parse(lineno, "pair witness needs `i j dist`"));
            }
            Witness::Pair {
                i: parse_usize(lineno, args[0])?,
                j: parse_usize(lineno, args[1])?,
                dist: parse_rat_at(lineno, args[2])?,
            }
        }
        "all-zero" => {
            let [n] = fixed::<1>(lineno, args)?;
            Witness::AllZero { n }
        }
        "covers" => {
            let [k] = fixed::<1>(lineno, args)?;
            let mut covers = Vec::with_capacity(k);
            for _ in 0..k {
                let (ln, toks) = reader.expect("w-cover")?;
                let (head, tail) = split_colon(ln, &toks)?;
                if head.len() != 1 {
                    return Err(Error::parse(ln, "cover line needs one ε before `:`"));
                }
                covers.push((parse_rat_at(ln, head[0])?, parse_idx_list(ln, &tail)?));
            }
            Witness::Covers { covers }
        }
        "cover-budget" => {
            let (head, tail) = split_colon(lineno, args)?;
            if head.len() != 1 {
                return Err(Error::parse(lineno, "cover-budget needs one ε before `:`"));
            }
            Witness::CoverBudget {
                eps: parse_rat_at(lineno, head[0])?,
                centers: parse_idx_list(lineno, &tail)?,
            }
        }
        "connected" => {
            let [k] = fixed::<1>(lineno, args)?;
            let mut per_eps = Vec::with_capacity(k);
            for _ in 0..k {
                let (ln, toks) = reader.expect("w-count")?;
                if toks.len() != 2 {
                    return Err(Error::parse(ln, "count line needs `eps count`"));
                }
                per_eps.push((parse_rat_at(ln, toks[0])?, parse_usize(ln, toks[1])?));
            }
            Witness::Connected { per_eps }
        }
        "cluster-split" => {
            if args.len() != 1 {
                return Err(Error::parse(lineno, "cluster-split needs one ε"));
            }
            let eps = parse_rat_at(lineno, args[0])?;
            let (ln, toks) = reader.expect("w-left")?;
            let left = parse_idx_list(ln, &toks)?;
            let (ln, toks) = reader.expect("w-right")?;
            let right = parse_idx_list(ln, &toks)?;
            Witness::ClusterSplit { eps, left, right }
        }
        "schedule" => {
            let [k] = fixed::<1>(lineno, args)?;
            let mut per_delta = Vec::with_capacity(k);
            for _ in 0..k {
                let (ln, toks) = reader.expect("w-delta")?;
                let rs = parse_rat_toks(ln, &toks)?;
                if rs.len() != 3 {
                    return Err(Error::parse(ln, "delta line needs `delta dprime eps`"));
                }
                let mut it = rs.into_iter();
                per_delta.push((
                    it.next().unwrap(),
                    it.next().unwrap(),
                    it.next().unwrap(),
                ));
            }
            Witness::Schedule { per_delta }
        }
        "avoiding-path" => {
            let (head, tail) = split_colon(lineno, args)?;
            let rs = parse_rat_toks(lineno, &head)?;
            if rs.len() != 3 {
                return Err(Error::parse(lineno, "avoiding-path needs `delta dprime eps : path`"));
            }
            let mut it = rs.into_iter();
            Witness::AvoidingPath {
                delta: it.next().unwrap(),
                dprime: it.next().unwrap(),
                eps: it.next().unwrap(),
                path: parse_idx_list(lineno, &tail)?,
            }
        }
        "no-testable-delta" => Witness::NoTestableDelta,
        "triples-scanned" => {
            let [count] = fixed::<1>(lineno, args)?;
            Witness::TriplesScanned { count }
        }
        "triple-fail" => {
            let triple = fixed::<3>(lineno, args)?;
            let mut fails = Vec::with_capacity(3);
            for _ in 0..3 {
                let (ln, toks) = reader.expect("w-arr")?;
                let (head, tail) = split_colon(ln, &toks)?;
                if head.len() != 4 {
                    return Err(Error::parse(ln, "arr line needs `mid delta dprime eps : path`"));
                }
                fails.push(ArrangementFail {
                    mid: parse_usize(ln, head[0])?,
                    delta: parse_rat_at(ln, head[1])?,
                    dprime: parse_rat_at(ln, head[2])?,
                    eps: parse_rat_at(ln, head[3])?,
                    path: parse_idx_list(ln, &tail)?,
                });
            }
            Witness::TripleFail { triple, fails }
        }
        "triples-undecided" => {
            let [count] = fixed::<1>(lineno, args)?;
            let pending = match reader.peek() {
                Some((_, line)) if line.starts_with("w-pending") => {
                    let (ln, toks) = reader.expect("w-pending")?;
                    Some(fixed::<3>(ln, &toks)?)
                }
                _ => None,
            };
            Witness::TriplesUndecided { count, pending }
        }
        "pairs-scanned" => {
            let [count] = fixed::<1>(lineno, args)?;
            Witness::PairsScanned { count }
        }
        "local-split" => {
            if args.len() != 6 {
                return Err(Error::parse(
                    lineno,
                    "local-split needs `center r eps eps_fine a b`",
                ));
            }
            Witness::LocalSplit {
                center: parse_usize(lineno, args[0])?,
                r: parse_rat_at(lineno, args[1])?,
                eps: parse_rat_at(lineno, args[2])?,
                eps_fine: parse_rat_at(lineno, args[3])?,
                a: parse_usize(lineno, args[4])?,
                b: parse_usize(lineno, args[5])?,
            }
        }
        "pairs-undecided" => {
            let [count] = fixed::<1>(lineno, args)?;
            Witness::PairsUndecided { count }
        }
        "tuples-scanned" => {
            let [count] = fixed::<1>(lineno, args)?;
            Witness::TuplesScanned { count }
        }
        "tuple-fail" => {
            let tuple = fixed::<4>(lineno, args)?;
            let mut fails = Vec::with_capacity(3);
            for _ in 0..3 {
                let (ln, toks) = reader.expect("w-clause")?;
                let (head, tail) = match toks.iter().position(|t| *t == ":") {
                    Some(p) => (toks[..p].to_vec(), Some(toks[p + 1..].to_vec())),
                    None => (toks.clone(), None),
                };
                if head.len() != 8 {
                    return Err(Error::parse(
                        ln,
                        "clause line needs `o0 o1 o2 o3 clause position radius eps [: path]`",
                    ));
                }
                let order = fixed::<4>(ln, &head[..4])?;
                fails.push(CircClauseFail {
                    order,
                    clause: parse_usize(ln, head[4])? as u8,
                    position: parse_usize(ln, head[5])? as u8,
                    radius: parse_rat_at(ln, head[6])?,
                    eps: parse_rat_at(ln, head[7])?,
                    path: match tail {
                        None => None,
                        Some(t) => Some(parse_idx_list(ln, &t)?),
                    },
                });
            }
            Witness::TupleFail { tuple, fails }
        }
        "tuples-undecided" => {
            let [count] = fixed::<1>(lineno, args)?;
            Witness::TuplesUndecided { count }
        }
        other => return Err(Error::parse(lineno, format!("unknown witness tag {other:?}"))),
    })
}

fn parse_block(reader: &mut BlockReader) -> Result<Verdict> {
    let (lineno, toks) = reader.expect("checker")?;
    let checker = match toks.as_slice() {
        ["ndegen"] => CheckerKind::Ndegen,
        ["cpct"] => CheckerKind::Cpct,
        ["conn"] => CheckerKind::Conn,
        ["lc"] => CheckerKind::Lc,
        ["ord"] => CheckerKind::Ord,
        ["circ"] => CheckerKind::Circ,
        ["noncompact"] => CheckerKind::Noncompact,
        ["btw", x, y, z] => CheckerKind::Btw {
            x: parse_usize(lineno, x)?,
            y: parse_usize(lineno, y)?,
            z: parse_usize(lineno, z)?,
        },
        _ => return Err(Error::parse(lineno, format!("unknown checker {toks:?}"))),
    };
    let (lineno, toks) = reader.expect("space")?;
    let space = match toks.as_slice() {
        ["base"] => SpaceRef::Base,
        ["compactified", b] => SpaceRef::Compactified { base: parse_usize(lineno, b)? },
        _ => return Err(Error::parse(lineno, format!("unknown space {toks:?}"))),
    };
    let (lineno, toks) = reader.expect("status")?;
    let status = match toks.as_slice() {
        [s] => Status::parse(s).map_err(|_| Error::parse(lineno, format!("bad status {s:?}")))?,
        _ => return Err(Error::parse(lineno, "status line needs one value")),
    };
    let (lineno, toks) = reader.expect("points")?;
    let [n_points] = fixed::<1>(lineno, &toks)?;
    let (lineno, toks) = reader.expect("net")?;
    let [net_len] = fixed::<1>(lineno, &toks)?;
    let (lineno, toks) = reader.expect("eps")?;
    let eps_grid = parse_rat_toks(lineno, &toks)?;
    let (lineno, toks) = reader.expect("delta")?;
    let delta_grid = parse_rat_toks(lineno, &toks)?;
    let (lineno, toks) = reader.expect("maxlen")?;
    let [max_path_len] = fixed::<1>(lineno, &toks)?;
    let (lineno, toks) = reader.expect("budget")?;
    let [tuple_budget] = fixed::<1>(lineno, &toks)?;
    let witness = parse_witness(reader)?;
    if let Some((lineno, line)) = reader.peek() {
        return Err(Error::parse(lineno, format!("unexpected trailing line {line:?}")));
    }
    Ok(Verdict {
        checker,
        space,
        status,
        witness,
        resolution: Resolution { n_points, eps_grid, delta_grid, max_path_len, tuple_budget },
        net_len,
    })
}

/// Parse a report: any number of `verdict v1 … end` blocks.
pub fn parse_report(text: &str) -> Result<Vec<Verdict>> {
    let mut verdicts = Vec::new();
    let mut lines = text.lines().enumerate();
    while let Some((lineno, raw)) = lines.next() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line != "verdict v1" {
            return Err(Error::parse(
                lineno + 1,
                format!("expected `verdict v1`, found {line:?}"),
            ));
        }
        let mut block = Vec::new();
        let mut terminated = false;
        for (n, l) in lines.by_ref() {
            let l = l.trim();
            if l == "end" {
                terminated = true;
                break;
            }
            if !l.is_empty() {
                block.push((n + 1, l));
            }
        }
        if !terminated {
            return Err(Error::parse(lineno + 1, "verdict block never reaches `end`"));
        }
        verdicts.push(parse_block(&mut BlockReader { lines: block, pos: 0 })?);
    }
    Ok(verdicts)
}

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(format!("witness does not re-verify: {}", msg.into())))
    }
}

/// Points reachable from `start` through steps `d < eps` inside `allowed`.
fn reach(net: &FiniteNet, allowed: &[bool], eps: &Rat, start: usize) -> Vec<bool> {
    let m = allowed.len();
    let mut seen = vec![false; m];
    if !allowed[start] {
        return seen;
    }
    seen[start] = true;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for w in 0..m {
            if allowed[w] && !seen[w] && net.dist(v, w) < *eps {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Number of components of the first `m` points under edges `d < threshold`.
fn component_count(net: &FiniteNet, m: usize, threshold: &Rat) -> usize {
    let allowed = vec![true; m];
    let mut labeled = vec![false; m];
    let mut count = 0;
    for i in 0..m {
        if !labeled[i] {
            count += 1;
            for (j, hit) in reach(net, &allowed, threshold, i).into_iter().enumerate() {
                if hit {
                    labeled[j] = true;
                }
            }
        }
    }
    count
}

/// A path must step strictly below ε and keep every point inside `0..m`.
fn verify_path_steps(net: &FiniteNet, m: usize, path: &[usize], eps: &Rat) -> Result<()> {
    require(!path.is_empty(), "empty path")?;
    for &p in path {
        require(p < m, format!("path point {p} outside the working net"))?;
    }
    for w in path.windows(2) {
        require(
            net.dist(w[0], w[1]) < *eps,
            format!("path step {} → {} is not below ε", w[0], w[1]),
        )?;
    }
    Ok(())
}

/// `dprime` must immediately follow `delta` in the δ grid, with the recorded
/// ε the finest grid ε lying below `delta`.
fn verify_btw_scales(res: &Resolution, delta: &Rat, dprime: &Rat, eps: &Rat) -> Result<()> {
    let t = res
        .delta_grid
        .iter()
        .position(|d| d == delta)
        .ok_or_else(|| Error::invalid("witness does not re-verify: δ is not on the grid"))?;
    require(
        res.delta_grid.get(t + 1) == Some(dprime),
        "δ′ does not follow δ on the grid",
    )?;
    require(res.eps_grid.last() == Some(eps), "ε is not the finest grid value")?;
    require(eps < delta, "ε is not below δ")?;
    Ok(())
}

/// Structural verification of the carried evidence against the net.
fn verify_witness(v: &Verdict, net: &FiniteNet) -> Result<()> {
    let res = &v.resolution;
    let m = v.net_len;
    require(m <= net.len(), "recorded net size exceeds the provided net")?;
    require(m <= res.n_points, "recorded net size exceeds the resolution")?;
    let in_range = |i: usize| require(i < m, format!("index {i} outside the working net"));
    match &v.witness {
        Witness::None => Ok(()),
        Witness::Pair { i, j, dist } => {
            in_range(*i)?;
            in_range(*j)?;
            require(i < j, "pair indices out of order")?;
            require(!dist.is_zero(), "recorded distance is zero")?;
            require(net.dist(*i, *j) == *dist, "recorded distance differs from the net")
        }
        Witness::AllZero { n } => {
            require(*n == m, "collapsed-count differs from the working net")?;
            for i in 0..*n {
                for j in i + 1..*n {
                    require(net.dist(i, j).is_zero(), format!("pair ({i}, {j}) is not at zero"))?;
                }
            }
            Ok(())
        }
        Witness::Covers { covers } => {
            require(covers.len() == res.eps_grid.len(), "one cover per grid ε required")?;
            for ((eps, centers), grid_eps) in covers.iter().zip(&res.eps_grid) {
                require(eps == grid_eps, "cover ε differs from the grid")?;
                require(centers.len() <= res.tuple_budget, "cover exceeds the budget")?;
                for &c in centers {
                    in_range(c)?;
                }
                for i in 0..m {
                    require(
                        centers.iter().any(|&c| net.dist(c, i) <= *eps),
                        format!("point {i} is not covered at ε = {}", fmt_rat(eps)),
                    )?;
                }
            }
            Ok(())
        }
        Witness::CoverBudget { eps, centers } => {
            require(res.eps_grid.contains(eps), "ε is not on the grid")?;
            require(
                centers.len() == res.tuple_budget + 1,
                "separated family must exceed the budget by one",
            )?;
            for &c in centers {
                in_range(c)?;
            }
            for (a, &ci) in centers.iter().enumerate() {
                for &cj in &centers[a + 1..] {
                    require(
                        net.dist(ci, cj) > *eps,
                        format!("centers {ci} and {cj} are not ε-separated"),
                    )?;
                }
            }
            Ok(())
        }
        Witness::Connected { per_eps } => {
            require(per_eps.len() == res.eps_grid.len(), "one count per grid ε required")?;
            for ((eps, count), grid_eps) in per_eps.iter().zip(&res.eps_grid) {
                require(eps == grid_eps, "count ε differs from the grid")?;
                let threshold = int(2) * eps;
                require(
                    component_count(net, m, &threshold) == *count,
                    format!("component count at ε = {} differs", fmt_rat(eps)),
                )?;
            }
            Ok(())
        }
        Witness::ClusterSplit { eps, left, right } => {
            require(res.eps_grid.contains(eps), "ε is not on the grid")?;
            require(!left.is_empty() && !right.is_empty(), "split sides must be nonempty")?;
            let mut all: Vec<usize> = left.iter().chain(right.iter()).copied().collect();
            all.sort_unstable();
            require(
                all == (0..m).collect::<Vec<_>>(),
                "split sides do not partition the working net",
            )?;
            let threshold = int(2) * eps;
            for &i in left {
                for &j in right {
                    require(
                        net.dist(i, j) >= threshold,
                        format!("points {i} and {j} connect the two sides"),
                    )?;
                }
            }
            Ok(())
        }
        Witness::Schedule { per_delta } => {
            let testable = testable_deltas(res);
            require(per_delta.len() == testable.len(), "one entry per testable δ required")?;
            for ((delta, dprime, eps), &t) in per_delta.iter().zip(&testable) {
                require(*delta == res.delta_grid[t], "schedule δ differs from the grid")?;
                verify_btw_scales(res, delta, dprime, eps)?;
            }
            Ok(())
        }
        Witness::AvoidingPath { delta, dprime, eps, path } => {
            let (x, y, z) = match v.checker {
                CheckerKind::Btw { x, y, z } => (x, y, z),
                _ => return Err(Error::invalid("avoiding-path witness outside a btw verdict")),
            };
            verify_btw_scales(res, delta, dprime, eps)?;
            verify_path_steps(net, m, path, eps)?;
            require(path.first() == Some(&x), "path does not start at x")?;
            require(path.last() == Some(&z), "path does not end at z")?;
            for &p in path {
                require(
                    net.dist(p, y) > *dprime,
                    format!("path point {p} enters the closed δ′-ball at the middle"),
                )?;
            }
            Ok(())
        }
        Witness::NoTestableDelta => {
            require(testable_deltas(res).is_empty(), "the grids do offer a testable δ")
        }
        Witness::TriplesScanned { count } => {
            let expected = if m < 3 { 0 } else { m * (m - 1) * (m - 2) / 6 };
            require(*count == expected, "triple count is not a complete scan")?;
            require(*count <= res.tuple_budget, "scan exceeds the budget")
        }
        Witness::TripleFail { triple, fails } => {
            let [a, b, c] = *triple;
            require(a < b && b < c, "triple indices out of order")?;
            in_range(c)?;
            let arrangements = [(a, b, c), (b, a, c), (a, c, b)];
            require(fails.len() == 3, "all three arrangements must be refuted")?;
            for ((x, mid, z), f) in arrangements.into_iter().zip(fails) {
                require(f.mid == mid, "arrangement middles out of order")?;
                verify_btw_scales(res, &f.delta, &f.dprime, &f.eps)?;
                verify_path_steps(net, m, &f.path, &f.eps)?;
                require(f.path.first() == Some(&x), "path does not start at x")?;
                require(f.path.last() == Some(&z), "path does not end at z")?;
                for &p in &f.path {
                    require(
                        net.dist(p, mid) > f.dprime,
                        format!("path point {p} enters the closed δ′-ball at {mid}"),
                    )?;
                }
            }
            Ok(())
        }
        Witness::TriplesUndecided { count, pending } => {
            require(*count <= res.tuple_budget, "scan exceeds the budget")?;
            if let Some([a, b, c]) = pending {
                require(*count == res.tuple_budget, "a pending triple implies budget exhaustion")?;
                require(a < b && b < c, "pending triple out of order")?;
                in_range(*c)?;
            }
            Ok(())
        }
        Witness::PairsScanned { count } => {
            require(
                *count == m * res.delta_grid.len(),
                "pair count is not a complete scan",
            )?;
            require(*count <= res.tuple_budget, "scan exceeds the budget")
        }
        Witness::LocalSplit { center, r, eps, eps_fine, a, b } => {
            in_range(*center)?;
            in_range(*a)?;
            in_range(*b)?;
            require(res.delta_grid.contains(r), "radius is not on the δ grid")?;
            require(res.eps_grid.first() == Some(eps), "ε is not the coarsest grid value")?;
            require(
                res.eps_grid.contains(eps_fine) && eps_fine < eps,
                "fine ε is not a finer grid value",
            )?;
            let two_r = int(2) * r;
            require(
                net.dist(*a, *center) < *r && net.dist(*b, *center) < *r,
                "witness points lie outside the inner ball",
            )?;
            let bmask: Vec<bool> = (0..m).map(|i| net.dist(i, *center) < two_r).collect();
            require(
                reach(net, &bmask, eps, *a)[*b],
                "witness points are already split at the coarse scale",
            )?;
            require(
                !reach(net, &bmask, eps_fine, *a)[*b],
                "witness points still share a component at the fine scale",
            )?;
            Ok(())
        }
        Witness::PairsUndecided { count } => {
            require(*count <= res.tuple_budget, "scan exceeds the budget")
        }
        Witness::TuplesScanned { count } => {
            let expected = if m < 4 { 0 } else { m * (m - 1) * (m - 2) * (m - 3) / 24 };
            require(*count == expected, "tuple count is not a complete scan")?;
            require(*count <= res.tuple_budget, "scan exceeds the budget")
        }
        Witness::TupleFail { tuple, fails } => {
            let [a, b, c, d] = *tuple;
            require(a < b && b < c && c < d, "tuple indices out of order")?;
            in_range(d)?;
            let expected = [[a, b, c, d], [a, b, d, c], [a, c, b, d]];
            require(fails.len() == 3, "all three arrangements must be refuted")?;
            require(res.delta_grid.len() >= 2, "the adjacency clause needs two grid δs")?;
            for (order, f) in expected.into_iter().zip(fails) {
                require(f.order == order, "arrangement orders out of order")?;
                require(
                    res.delta_grid.last() == Some(&f.radius),
                    "radius is not the finest grid δ",
                )?;
                require(
                    res.eps_grid.last() == Some(&f.eps),
                    "ε is not the finest grid value",
                )?;
                match f.clause {
                    1 => {
                        let i = f.position as usize;
                        require(i < 4, "clause-1 position out of range")?;
                        require(f.path.is_none(), "clause-1 failures carry no path")?;
                        let x = order[i];
                        let y = order[(i + 1) % 4];
                        let f1 = order[(i + 2) % 4];
                        let f2 = order[(i + 3) % 4];
                        let allowed: Vec<bool> = {
                            let a1 = outside_ball(net, m, f1, &f.radius, true);
                            let a2 = outside_ball(net, m, f2, &f.radius, true);
                            a1.into_iter().zip(a2).map(|(p, q)| p && q).collect()
                        };
                        let connected = allowed[x] && allowed[y] && reach(net, &allowed, &f.eps, x)[y];
                        require(
                            !connected,
                            format!("an avoiding path joins {x} and {y} after all"),
                        )?;
                    }
                    2 => {
                        let i = f.position as usize;
                        require(i < 2, "clause-2 position out of range")?;
                        let path = f
                            .path
                            .as_ref()
                            .ok_or_else(|| Error::invalid("witness does not re-verify: clause-2 failure carries no path"))?;
                        let x = order[i];
                        let y = order[i + 2];
                        let m1 = order[i + 1];
                        let m2 = order[(i + 3) % 4];
                        verify_path_steps(net, m, path, &f.eps)?;
                        require(path.first() == Some(&x), "diagonal path does not start at x")?;
                        require(path.last() == Some(&y), "diagonal path does not end at y")?;
                        for &p in path {
                            require(
                                net.dist(p, m1) >= f.radius && net.dist(p, m2) >= f.radius,
                                format!("diagonal path point {p} enters a middle ball"),
                            )?;
                        }
                    }
                    other => {
                        return Err(Error::invalid(format!(
                            "witness does not re-verify: unknown clause {other}"
                        )))
                    }
                }
            }
            Ok(())
        }
        Witness::TuplesUndecided { count } => {
            require(*count <= res.tuple_budget, "scan exceeds the budget")
        }
    }
}

fn rerun(v: &Verdict, net: &FiniteNet) -> Result<Verdict> {
    match v.checker {
        CheckerKind::Ndegen => check_ndegen(net, &v.resolution),
        CheckerKind::Cpct => check_cpct(net, &v.resolution),
        CheckerKind::Conn => check_conn(net, &v.resolution),
        CheckerKind::Lc => check_lc(net, &v.resolution),
        CheckerKind::Btw { x, y, z } => check_btw(net, x, y, z, &v.resolution),
        CheckerKind::Ord => check_ord(net, &v.resolution),
        CheckerKind::Circ => check_circ(net, &v.resolution),
        CheckerKind::Noncompact => noncompact_verdict(net, &v.resolution),
    }
}

/// Replay a verdict against a net: verify the carried witness structurally,
/// re-run the checker at the recorded resolution, and require the recomputed
/// verdict to match. Returns the reproduced status.
pub fn replay(v: &Verdict, net: &FiniteNet) -> Result<Status> {
    verify_witness(v, net)?;
    let fresh = rerun(v, net)?;
    if fresh.status != v.status {
        return Err(Error::invalid(format!(
            "replay mismatch: recorded {}, recomputed {}",
            v.status.as_str(),
            fresh.status.as_str()
        )));
    }
    if fresh.net_len != v.net_len {
        return Err(Error::invalid(format!(
            "replay mismatch: recorded net size {}, recomputed {}",
            v.net_len, fresh.net_len
        )));
    }
    if fresh.witness != v.witness {
        return Err(Error::invalid(
            "replay mismatch: recomputed evidence differs from the recorded witness",
        ));
    }
    Ok(fresh.status)
}

/// Replay against a presentation, rebuilding the net the verdict was computed
/// on: the presentation itself for base-space verdicts, its compactification
/// for compactified ones.
pub fn replay_against(v: &Verdict, pres: &Presentation) -> Result<Status> {
    let net = match v.space {
        SpaceRef::Base => {
            FiniteNet::from_presentation(pres, v.resolution.n_points.min(pres.len()), 0)?
        }
        SpaceRef::Compactified { base } => {
            let cp = compactify(pres, base)?;
            cp.net(v.resolution.n_points.min(cp.len()), 0)?
        }
    };
    replay(v, &net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::SparsePoint;
    use crate::rat::rat;

    fn res(eps: &[(i64, i64)], delta: &[(i64, i64)], budget: usize) -> Resolution {
        Resolution {
            n_points: 100,
            eps_grid: eps.iter().map(|&(n, d)| rat(n, d)).collect(),
            delta_grid: delta.iter().map(|&(n, d)| rat(n, d)).collect(),
            max_path_len: 64,
            tuple_budget: budget,
        }
    }

    fn line_pres(vals: &[(i64, i64)]) -> Presentation {
        let pts = vals
            .iter()
            .map(|&(n, d)| SparsePoint::from_pairs([(0u32, rat(n, d))]))
            .collect();
        Presentation::new("line", pts).unwrap()
    }

    fn chain_net() -> FiniteNet {
        let pts: Vec<(i64, i64)> = (0..=8).map(|k| (k, 8)).collect();
        FiniteNet::from_presentation(&line_pres(&pts), 9, 0).unwrap()
    }

    fn circle_net() -> FiniteNet {
        FiniteNet::from_matrix_fn(8, 0, |i, j| {
            let s = (i as i64 - j as i64).unsigned_abs();
            Rat::from_integer((s.min(8 - s) as i64).into()) * rat(1, 8)
        })
        .unwrap()
    }

    /// One verdict per witness variant, mixing real checker output with
    /// synthetic fillers for the variants a single net cannot produce.
    fn sample_verdicts() -> Vec<Verdict> {
        let net = chain_net();
        let circle = circle_net();
        let mut out = vec![
            check_ndegen(&net, &res(&[(1, 2)], &[], 1000)).unwrap(),
            check_cpct(&net, &res(&[(1, 2), (1, 4)], &[], 1000)).unwrap(),
            check_cpct(&net, &res(&[(1, 16)], &[], 3)).unwrap(),
            check_conn(&net, &res(&[(1, 4)], &[], 1000)).unwrap(),
            check_conn(&net, &res(&[(1, 4), (1, 32)], &[], 1000)).unwrap(),
            check_btw(&net, 0, 4, 8, &res(&[(3, 16)], &[(1, 2), (1, 4)], 1000)).unwrap(),
            check_btw(&net, 3, 0, 8, &res(&[(3, 16)], &[(1, 2), (1, 4)], 1000)).unwrap(),
            check_btw(&net, 0, 4, 8, &res(&[(3, 16)], &[(1, 8)], 1000)).unwrap(),
            check_ord(&net, &res(&[(3, 16)], &[(1, 4), (1, 16)], 1000)).unwrap(),
            check_ord(&circle, &res(&[(3, 16)], &[(1, 4), (1, 16)], 1000)).unwrap(),
            check_ord(&net, &res(&[(3, 16)], &[(1, 4), (1, 16)], 10)).unwrap(),
            check_lc(&net, &res(&[(3, 16), (5, 32)], &[(1, 4)], 1000)).unwrap(),
            check_lc(&net, &res(&[(3, 16), (5, 32)], &[(1, 4)], 5)).unwrap(),
            check_circ(&circle, &res(&[(3, 16)], &[(1, 4), (1, 16)], 1000)).unwrap(),
            check_circ(&net, &res(&[(3, 16)], &[(1, 4), (1, 16)], 1000)).unwrap(),
            check_circ(&circle, &res(&[(3, 16)], &[(1, 4), (1, 16)], 7)).unwrap(),
            noncompact_verdict(&net, &res(&[(1, 16)], &[], 3)).unwrap(),
        ];
        // Variants not produced above: ndegen Fails, lc Fails, btw without a
        // testable δ already covered; add a collapsed net for all-zero and a
        // split point for local-split.
        let zero = FiniteNet::from_matrix_fn(2, 0, |_, _| rat(0, 1)).unwrap();
        out.push(check_ndegen(&zero, &res(&[(1, 2)], &[], 1000)).unwrap());
        let split = FiniteNet::from_presentation(&line_pres(&[(0, 1), (1, 8), (1, 2)]), 3, 0).unwrap();
        out.push(check_lc(&split, &res(&[(3, 16), (1, 16)], &[(1, 1)], 1000)).unwrap());
        out.push(Verdict {
            checker: CheckerKind::Ndegen,
            space: SpaceRef::Compactified { base: 0 },
            status: Status::Holds,
            witness: Witness::None,
            resolution: res(&[(1, 2)], &[], 1),
            net_len: 0,
        });
        out
    }

    #[test]
    fn report_round_trips_every_witness_variant() {
        let verdicts = sample_verdicts();
        let seen: std::collections::BTreeSet<&'static str> = verdicts
            .iter()
            .map(|v| match v.witness {
                Witness::None => "none",
                Witness::Pair { .. } => "pair",
                Witness::AllZero { .. } => "all-zero",
                Witness::Covers { .. } => "covers",
                Witness::CoverBudget { .. } => "cover-budget",
                Witness::Connected { .. } => "connected",
                Witness::ClusterSplit { .. } => "cluster-split",
                Witness::Schedule { .. } => "schedule",
                Witness::AvoidingPath { .. } => "avoiding-path",
                Witness::NoTestableDelta => "no-testable-delta",
                Witness::TriplesScanned { .. } => "triples-scanned",
                Witness::TripleFail { .. } => "triple-fail",
                Witness::TriplesUndecided { .. } => "triples-undecided",
                Witness::PairsScanned { .. } => "pairs-scanned",
                Witness::LocalSplit { .. } => "local-split",
                Witness::PairsUndecided { .. } => "pairs-undecided",
                Witness::TuplesScanned { .. } => "tuples-scanned",
                Witness::TupleFail { .. } => "tuple-fail",
                Witness::TuplesUndecided { .. } => "tuples-undecided",
            })
            .collect();
        assert_eq!(seen.len(), 19, "sample set covers every witness variant");
        let text = render_report(&verdicts);
        let parsed = parse_report(&text).unwrap();
        assert_eq!(parsed, verdicts);
        // Canonical renders re-render identically.
        assert_eq!(render_report(&parsed), text);
    }

    #[test]
    fn replay_reproduces_real_verdicts() {
        let net = chain_net();
        let circle = circle_net();
        for (v, n) in [
            (check_ndegen(&net, &res(&[(1, 2)], &[], 1000)).unwrap(), &net),
            (check_conn(&net, &res(&[(1, 4), (1, 32)], &[], 1000)).unwrap(), &net),
            (check_ord(&circle, &res(&[(3, 16)], &[(1, 4), (1, 16)], 1000)).unwrap(), &circle),
            (check_circ(&net, &res(&[(3, 16)], &[(1, 4), (1, 16)], 1000)).unwrap(), &net),
            (check_lc(&net, &res(&[(3, 16), (5, 32)], &[(1, 4)], 1000)).unwrap(), &net),
            (check_btw(&net, 3, 0, 8, &res(&[(3, 16)], &[(1, 2), (1, 4)], 1000)).unwrap(), &net),
            (check_cpct(&net, &res(&[(1, 16)], &[], 3)).unwrap(), &net),
            (noncompact_verdict(&net, &res(&[(1, 16)], &[], 3)).unwrap(), &net),
        ] {
            let text = render_verdict(&v);
            let parsed = parse_report(&text).unwrap();
            assert_eq!(parsed.len(), 1);
            assert_eq!(replay(&parsed[0], n).unwrap(), v.status);
        }
    }

    #[test]
    fn replay_rejects_tampered_evidence() {
        let net = chain_net();
        let circle = circle_net();

        // Moving a point across a cluster split reconnects the sides.
        let mut v = check_conn(&net, &res(&[(1, 4), (1, 32)], &[], 1000)).unwrap();
        if let Witness::ClusterSplit { left, right, .. } = &mut v.witness {
            let moved = right.remove(0);
            left.push(moved);
            left.sort_unstable();
        } else {
            panic!("expected a cluster split");
        }
        assert!(replay(&v, &net).is_err());

        // Altering a recorded distance.
        let mut v = check_ndegen(&net, &res(&[(1, 2)], &[], 1000)).unwrap();
        if let Witness::Pair { dist, .. } = &mut v.witness {
            *dist += rat(1, 64);
        } else {
            panic!("expected a pair");
        }
        assert!(replay(&v, &net).is_err());

        // Truncating a witness path breaks its endpoints.
        let mut v = check_ord(&circle, &res(&[(3, 16)], &[(1, 4), (1, 16)], 1000)).unwrap();
        if let Witness::TripleFail { fails, .. } = &mut v.witness {
            fails[0].path.pop();
        } else {
            panic!("expected a triple fail");
        }
        assert!(replay(&v, &circle).is_err());

        // Flipping the status alone is caught by the re-run comparison.
        let mut v = check_conn(&net, &res(&[(1, 4)], &[], 1000)).unwrap();
        v.status = Status::Fails;
        assert!(replay(&v, &net).is_err());
    }

    #[test]
    fn replay_against_rebuilds_compactified_nets() {
        let pres = line_pres(&(0..12).map(|k| (k, 1)).collect::<Vec<_>>());
        let r = res(&[(1, 2)], &[], 4);
        // Base-space verdict.
        let net = FiniteNet::from_presentation(&pres, 12, 0).unwrap();
        let v = noncompact_verdict(&net, &r).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert_eq!(replay_against(&v, &pres).unwrap(), Status::Holds);
        // Compactified verdict: the same check on the compactified net.
        let cp = compactify(&pres, 0).unwrap();
        let cnet = cp.net(13, 0).unwrap();
        let mut cv = check_ndegen(&cnet, &r).unwrap();
        cv.space = SpaceRef::Compactified { base: 0 };
        assert_eq!(replay_against(&cv, &pres).unwrap(), Status::Holds);
        // Against the wrong space the rebuilt net is one point short.
        let mut wrong = cv.clone();
        wrong.space = SpaceRef::Base;
        assert!(replay_against(&wrong, &pres).is_err());
    }

    #[test]
    fn parse_rejects_malformed_reports() {
        let good = render_verdict(&check_ndegen(&chain_net(), &res(&[(1, 2)], &[], 1000)).unwrap());
        assert!(parse_report(&good).is_ok());
        assert!(parse_report(&good.replace("end\n", "")).is_err());
        assert!(parse_report(&good.replace("verdict v1", "verdict v2")).is_err());
        assert!(parse_report(&good.replace("w pair", "w pear")).is_err());
        assert!(parse_report(&good.replace("status Holds", "status Perhaps")).is_err());
        assert!(parse_report(&format!("{good}stray\n")).is_err());
        assert!(parse_report("").unwrap().is_empty());
    }
}
