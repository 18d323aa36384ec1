use super::child::NONE;
use super::top::{Counting, TopIndex};
use crate::contracting::contract;
use crate::error::{Error, Result};
use crate::grammar::{derive_stats, expand, push_run, simplify, Flavor, Grammar, Run, Sym};
use crate::shaping::{make_leafy_nice, Tau, DEFAULT_BLOCK_BUDGET};
use crate::succinct::{bits_for, PackedString};
use num_bigint::BigUint;

/// Which structure answers access queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Weighted,
    Leafy,
    Explicit,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Weighted => "weighted",
            Route::Leafy => "leafy",
            Route::Explicit => "explicit",
        }
    }
}

/// Options for [`build_index`].
#[derive(Debug, Clone, PartialEq)]
pub struct BuildConfig {
    pub tau: f64,
    /// Also build the leafy index and let the shallower one answer queries.
    pub leafy: bool,
    /// Leaf block size; defaults to `ceil(log n / log sigma)`.
    pub b: Option<usize>,
    /// Store the text in packed form and answer access from it.
    pub explicit: bool,
    /// Fail with `PlannerViolation` if the index needs more bits.
    pub budget_bits: Option<u64>,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig { tau: 4.0, leafy: true, b: None, explicit: false, budget_bits: None }
    }
}

impl BuildConfig {
    pub fn with_tau(tau: f64) -> Self {
        BuildConfig { tau, ..Default::default() }
    }
}

/// Leafy index: a nice top grammar whose terminals are packed leaf blocks.
///
/// For weighted input the text is unrolled first: a character `c` of weight
/// `k` becomes `c` followed by `k - 1` copies of the continuation character
/// `sigma + c`, so every original character starts at a marked position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafyIndex {
    pub(crate) top: TopIndex,
    pub(crate) leaves: Vec<PackedString>,
    pub(crate) b: usize,
    pub(crate) unrolled: bool,
    pub(crate) d: usize,
}

impl LeafyIndex {
    pub fn top(&self) -> &TopIndex {
        &self.top
    }

    pub fn leaves(&self) -> &[PackedString] {
        &self.leaves
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn is_unrolled(&self) -> bool {
        self.unrolled
    }

    pub fn leaf_bits(&self) -> u64 {
        self.leaves.iter().map(|l| l.bits()).sum()
    }
}

/// The text in packed form with prefix weights for weighted alphabets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitText {
    pub(crate) text: PackedString,
    /// `cum[j]` is the weight of the first `j` characters; empty when unweighted.
    pub(crate) cum: Vec<u64>,
}

impl ExplicitText {
    pub fn text(&self) -> &PackedString {
        &self.text
    }

    pub fn bits(&self) -> u64 {
        let w = self.cum.last().copied().unwrap_or(0);
        self.text.bits() + self.cum.len() as u64 * bits_for(w + 1) as u64
    }
}

/// Answer to an access query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hit {
    pub terminal: Sym,
    /// Unweighted position of the character.
    pub pos: u64,
    /// Weight of the text before the character.
    pub offset: u64,
}

/// Random-access index over the string of a grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessIndex {
    pub(crate) weighted: TopIndex,
    pub(crate) leafy: Option<LeafyIndex>,
    pub(crate) explicit: Option<ExplicitText>,
    pub(crate) route: Route,
    pub(crate) sigma: usize,
    pub(crate) terminal_weights: Vec<u64>,
    pub(crate) length: u64,
    pub(crate) input_size: usize,
    pub(crate) tau: Tau,
    pub(crate) d: usize,
}

/// Per-structure sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct TopReport {
    pub size: usize,
    pub variables: usize,
    pub height: u32,
    pub bits: u64,
    pub max_bucket_load: usize,
    pub sparsity_violations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeafyReport {
    pub top: TopReport,
    pub b: usize,
    pub d: usize,
    pub leaves: usize,
    pub leaf_bits: u64,
    pub unrolled: bool,
}

/// Sizes, parameters and heights of a built index.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildReport {
    pub input_size: usize,
    pub length: u64,
    pub weight: u64,
    pub sigma: usize,
    pub tau: f64,
    pub tau_root: f64,
    pub d: usize,
    pub weighted: TopReport,
    pub leafy: Option<LeafyReport>,
    pub explicit_bits: u64,
    pub route: Route,
    pub total_bits: u64,
    /// `total_bits / (reshaped size * log2 weight)`.
    pub bits_constant: f64,
}

fn top_report(t: &TopIndex, d: usize) -> TopReport {
    TopReport {
        size: t.grammar.size(),
        variables: t.grammar.variable_count(),
        height: t.height,
        bits: t.bits(),
        max_bucket_load: t.max_bucket_load(),
        sparsity_violations: t.sparsity_violations(d).len(),
    }
}

/// Replaces every terminal `c` of weight `k > 1` by a variable spelling `c`
/// then `k - 1` copies of `sigma + c`. The result is unweighted.
pub fn unroll(g: &Grammar) -> Result<Grammar> {
    let sigma = g.terminal_count();
    let mut out = Grammar::with_terminals(2 * sigma, Flavor::Rlslg);
    let mut map: Vec<Sym> = Vec::with_capacity(g.symbol_count());
    for (c, &w) in g.terminal_weights.iter().enumerate() {
        if w > 1 {
            map.push(out.push_rule(vec![Run::one(c as Sym), Run::new((sigma + c) as Sym, w - 1)]));
        } else {
            map.push(c as Sym);
        }
    }
    let base = out.symbol_count() as Sym;
    for v in 0..g.variable_count() {
        map.push(base + v as Sym);
    }
    for rule in &g.rules {
        let mut r = Vec::with_capacity(rule.len());
        for run in rule {
            push_run(Flavor::Rlslg, &mut r, Run::new(map[run.sym as usize], run.exp));
        }
        out.rules.push(r);
    }
    out.start = map[g.start as usize];
    out.validate()?;
    Ok(out)
}

/// `ceil(log2 n / log2 sigma)`, at least 1. A unary alphabet counts as binary.
pub fn default_block_size(n: u64, sigma: usize) -> usize {
    let ln = (n.max(2) as f64).log2();
    let ls = (sigma.max(2) as f64).log2();
    ((ln / ls).ceil() as usize).max(1)
}

/// Whether `steps <= 3 + max(0, log_tau(n / (g * tau * b)))`, exactly.
pub fn within_depth_bound(steps: u32, n: u64, g: u64, tau: Tau, b: u64) -> bool {
    if steps <= 3 {
        return true;
    }
    // need g * b * tau^(e+1) <= n with e = steps - 3
    let e = steps - 3 + 1;
    let lhs = BigUint::from(g) * BigUint::from(b) * BigUint::from(tau.num()).pow(e);
    let rhs = BigUint::from(n) * BigUint::from(tau.den()).pow(e);
    lhs <= rhs
}

fn build_leafy(g: &Grammar, b: Option<usize>, tau_root: Tau, tau: Tau) -> Result<LeafyIndex> {
    let unrolled = !g.is_unweighted();
    let src = if unrolled { unroll(g)? } else { g.clone() };
    let n = derive_stats(&src)?.start_len(&src);
    let width = bits_for(src.terminal_count() as u64) as usize;
    let b = b
        .unwrap_or_else(|| default_block_size(n, src.terminal_count()))
        .clamp(1, n as usize)
        .min((DEFAULT_BLOCK_BUDGET as usize / width).max(1));
    let (lnice, _) = make_leafy_nice(&src, b, tau_root, tau)?;
    let (top, _) = simplify(&lnice.leafy.top)?;
    let leaves = lnice.leafy.leaves;
    let (counting, counts, lasts) = if unrolled {
        let sigma = g.terminal_count() as u32;
        let counts: Vec<u64> = leaves.iter().map(|l| l.to_vec().iter().filter(|&&c| c < sigma).count() as u64).collect();
        let lasts: Vec<u64> = leaves
            .iter()
            .map(|l| l.to_vec().iter().rposition(|&c| c < sigma).map_or(NONE, |p| p as u64))
            .collect();
        (Counting::Marks, counts, lasts)
    } else {
        (Counting::Weights, Vec::new(), Vec::new())
    };
    let top = TopIndex::build(top, tau_root, tau, counting, &counts, &lasts)?;
    Ok(LeafyIndex { top, leaves, b, unrolled, d: lnice.d })
}

fn build_explicit(g: &Grammar) -> Result<ExplicitText> {
    let st = derive_stats(g)?;
    let text = expand(g, g.start, st.start_len(g))?;
    let cum = if g.is_unweighted() {
        Vec::new()
    } else {
        let mut c = Vec::with_capacity(text.len() + 1);
        c.push(0u64);
        for &x in &text {
            c.push(c.last().unwrap() + g.terminal_weights[x as usize]);
        }
        c
    };
    Ok(ExplicitText { text: PackedString::from_slice(bits_for(g.terminal_count() as u64), &text), cum })
}

/// Contracts `g`, makes it `(|G| tau, tau)`-nice and builds child
/// structures. Weighted input also counts characters. Returns the index and
/// the contracting rule bound.
pub(crate) fn build_nice_top(g: &Grammar, tau: Tau) -> Result<(TopIndex, usize)> {
    let tau_root = tau.scaled(g.size().max(1) as u64);
    let (cg, _) = contract(g)?;
    let d = cg.d;
    let (ng, _) = crate::shaping::make_nice(&cg, tau_root, tau)?;
    let (h, _) = simplify(&ng.grammar)?;
    let counting = if g.is_unweighted() { Counting::Weights } else { Counting::Counts };
    let ones = vec![1u64; g.terminal_count()];
    Ok((TopIndex::build(h, tau_root, tau, counting, &ones, &[])?, d))
}

/// Builds an access index for `g`.
///
/// The grammar is contracted and made `(|G| tau, tau)`-nice, then every
/// variable gets a child structure. With `leafy` set a leafy index is built
/// as well and queries go to whichever has the smaller parse-tree height.
pub fn build_index(g: &Grammar, cfg: &BuildConfig) -> Result<AccessIndex> {
    g.validate()?;
    let tau = Tau::new(cfg.tau)?;
    let input_size = g.size().max(1);
    let tau_root = tau.scaled(input_size as u64);
    let st = derive_stats(g)?;
    let (weighted, d) = build_nice_top(g, tau)?;
    let leafy = if cfg.leafy { Some(build_leafy(g, cfg.b, tau_root, tau)?) } else { None };
    let explicit = if cfg.explicit { Some(build_explicit(g)?) } else { None };
    let route = if explicit.is_some() {
        Route::Explicit
    } else {
        match &leafy {
            Some(l) if l.top.height + 1 <= weighted.height => Route::Leafy,
            _ => Route::Weighted,
        }
    };
    let ix = AccessIndex {
        weighted,
        leafy,
        explicit,
        route,
        sigma: g.terminal_count(),
        terminal_weights: g.terminal_weights.clone(),
        length: st.start_len(g),
        input_size,
        tau,
        d,
    };
    if let Some(budget) = cfg.budget_bits {
        let used = ix.report().total_bits;
        if used > budget {
            return Err(Error::PlannerViolation(format!("index needs {used} bits, budget is {budget}")));
        }
    }
    Ok(ix)
}

impl AccessIndex {
    /// Weight of the text.
    pub fn weight(&self) -> u64 {
        self.weighted.total_weight()
    }

    /// Number of characters of the text.
    pub fn len(&self) -> u64 {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn terminal_weights(&self) -> &[u64] {
        &self.terminal_weights
    }

    pub fn is_unweighted(&self) -> bool {
        self.terminal_weights.iter().all(|&w| w == 1)
    }

    pub fn tau(&self) -> Tau {
        self.tau
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Size of the grammar the index was built from.
    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn weighted(&self) -> &TopIndex {
        &self.weighted
    }

    pub fn leafy(&self) -> Option<&LeafyIndex> {
        self.leafy.as_ref()
    }

    pub fn explicit(&self) -> Option<&ExplicitText> {
        self.explicit.as_ref()
    }

    /// Answers queries from `route`. Fails if that structure was not built.
    pub fn set_route(&mut self, route: Route) -> Result<()> {
        let ok = match route {
            Route::Weighted => true,
            Route::Leafy => self.leafy.is_some(),
            Route::Explicit => self.explicit.is_some(),
        };
        if !ok {
            return Err(Error::InvalidParameter(format!("index has no {} structure", route.name())));
        }
        self.route = route;
        Ok(())
    }

    /// Block size of the chosen route: the leaf size for the leafy route, 1
    /// otherwise.
    pub fn route_block(&self) -> u64 {
        match (self.route, &self.leafy) {
            (Route::Leafy, Some(l)) => l.b as u64,
            _ => 1,
        }
    }

    /// The character at weighted position `i`.
    pub fn access(&self, i: u64) -> Result<Hit> {
        self.access_traced(i).map(|(h, _)| h)
    }

    /// Like [`access`](Self::access), also returning the number of child
    /// queries made.
    pub fn access_traced(&self, i: u64) -> Result<(Hit, u32)> {
        match self.route {
            Route::Weighted => {
                let l = self.weighted.descend(i)?;
                Ok((Hit { terminal: l.sym, pos: l.count, offset: l.offset }, l.steps))
            }
            Route::Leafy => self.access_leafy(i),
            Route::Explicit => self.access_explicit(i),
        }
    }

    fn access_leafy(&self, i: u64) -> Result<(Hit, u32)> {
        let lf = self.leafy.as_ref().expect("leafy route has a leafy index");
        let l = lf.top.descend(i)?;
        let leaf = &lf.leaves[l.sym as usize];
        let p = (i - l.offset) as usize;
        let ch = leaf.char_at(p)?;
        let steps = l.steps + 1;
        if !lf.unrolled {
            return Ok((Hit { terminal: ch, pos: i, offset: i }, steps));
        }
        let sigma = self.sigma as u32;
        let mut count = l.count;
        let mut last = l.last;
        for q in 0..=p {
            if leaf.char_at(q)? < sigma {
                count += 1;
                last = Some(l.offset + q as u64);
            }
        }
        let terminal = if ch < sigma { ch } else { ch - sigma };
        let offset = last.expect("the text starts with a marked position");
        Ok((Hit { terminal, pos: count - 1, offset }, steps))
    }

    fn access_explicit(&self, i: u64) -> Result<(Hit, u32)> {
        let ex = self.explicit.as_ref().expect("explicit route has a packed text");
        let w = self.weight();
        if i >= w {
            return Err(Error::IndexOutOfRange { index: i, weight: w });
        }
        let (pos, offset) = if ex.cum.is_empty() {
            (i, i)
        } else {
            let j = ex.cum.partition_point(|&c| c <= i) - 1;
            (j as u64, ex.cum[j])
        };
        Ok((Hit { terminal: ex.text.char_at(pos as usize)?, pos, offset }, 0))
    }

    /// Whether `steps` child queries respect the height bound of the route.
    pub fn steps_within_bound(&self, steps: u32) -> bool {
        within_depth_bound(steps, self.weight(), self.input_size as u64, self.tau, self.route_block())
    }

    pub fn report(&self) -> BuildReport {
        let weighted = top_report(&self.weighted, self.d);
        let leafy = self.leafy.as_ref().map(|l| LeafyReport {
            top: top_report(&l.top, l.d),
            b: l.b,
            d: l.d,
            leaves: l.leaves.len(),
            leaf_bits: l.leaf_bits(),
            unrolled: l.unrolled,
        });
        let explicit_bits = self.explicit.as_ref().map_or(0, |e| e.bits());
        let total_bits =
            weighted.bits + leafy.as_ref().map_or(0, |l| l.top.bits + l.leaf_bits) + explicit_bits;
        let reshaped = weighted.size + leafy.as_ref().map_or(0, |l| l.top.size + l.leaves);
        let logw = (self.weight().max(2) as f64).log2();
        BuildReport {
            input_size: self.input_size,
            length: self.length,
            weight: self.weight(),
            sigma: self.sigma,
            tau: self.tau.as_f64(),
            tau_root: self.weighted.tau_root.as_f64(),
            d: self.d,
            weighted,
            leafy,
            explicit_bits,
            route: self.route,
            total_bits,
            bits_constant: total_bits as f64 / (reshaped.max(1) as f64 * logw),
        }
    }
}
