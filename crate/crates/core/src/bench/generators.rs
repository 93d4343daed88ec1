//! Seeded random problem generators for the bundled domains.

use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A generated problem: one PDDL file with both `:goal` and
/// `:goal-network` sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub name: String,
    pub problem: String,
}

pub trait InstanceGenerator: Send + Sync {
    fn domain(&self) -> &str;
    fn generate(&self, size: usize, seed: u64) -> GeneratedInstance;
}

fn rng(domain: &str, size: usize, seed: u64) -> ChaCha8Rng {
    // Mix the domain and size in so different families never share a stream.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in domain.bytes().chain((size as u64).to_le_bytes()) {
        h = (h ^ b as u64).wrapping_mul(0x100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h ^ seed)
}

fn pick(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.gen_range(0..n as u64) as usize
}

fn shuffle<T>(rng: &mut ChaCha8Rng, v: &mut [T]) {
    for i in (1..v.len()).rev() {
        let j = pick(rng, i + 1);
        v.swap(i, j);
    }
}

/// A goal network with one node per goal atom. `chains` lists index
/// sequences that must be released in order; with `final_node`, every atom
/// node precedes one last node holding their conjunction.
fn network_section(atoms: &[String], chains: &[Vec<usize>], final_node: bool) -> String {
    let mut out = String::from("  (:goal-network\n    (:nodes");
    for (i, a) in atoms.iter().enumerate() {
        write!(out, "\n      (g{} {a})", i + 1).unwrap();
    }
    if final_node {
        write!(out, "\n      (done (and {}))", atoms.join(" ")).unwrap();
    }
    out.push(')');
    let mut orderings = Vec::new();
    for c in chains {
        for w in c.windows(2) {
            orderings.push(format!("(g{} g{})", w[0] + 1, w[1] + 1));
        }
    }
    if final_node {
        orderings.extend((0..atoms.len()).map(|i| format!("(g{} done)", i + 1)));
    }
    if !orderings.is_empty() {
        write!(out, "\n    (:orderings {})", orderings.join(" ")).unwrap();
    }
    out.push_str(")\n");
    out
}

fn problem_text(
    name: &str,
    domain: &str,
    objects: &[(Vec<String>, &str)],
    init: &[String],
    goal: &[String],
    chains: &[Vec<usize>],
    final_node: bool,
) -> String {
    let mut out = format!("(define (problem {name})\n  (:domain {domain})\n  (:objects");
    for (names, ty) in objects {
        write!(out, "\n    {} - {ty}", names.join(" ")).unwrap();
    }
    out.push_str(")\n  (:init");
    for a in init {
        write!(out, "\n    {a}").unwrap();
    }
    out.push_str(")\n  (:goal (and");
    for a in goal {
        write!(out, "\n    {a}").unwrap();
    }
    out.push_str("))\n");
    out.push_str(&network_section(goal, chains, final_node));
    out.push_str(")\n");
    out
}

/// Number of ways to arrange `n` labelled blocks into towers.
fn tower_counts(n: usize) -> Vec<u128> {
    let mut binom = vec![vec![0u128; n + 1]; n + 1];
    for i in 0..=n {
        binom[i][0] = 1;
        for j in 1..=i {
            binom[i][j] = binom[i - 1][j - 1] + if j < i { binom[i - 1][j] } else { 0 };
        }
    }
    let mut fact = vec![1u128; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i as u128;
    }
    let mut a = vec![0u128; n + 1];
    a[0] = 1;
    for m in 1..=n {
        // The tower holding the first block has k blocks.
        a[m] = (1..=m)
            .map(|k| binom[m - 1][k - 1] * fact[k] * a[m - k])
            .sum();
    }
    a
}

/// Towers, bottom block first, drawn uniformly over all arrangements.
pub fn random_towers(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<usize>> {
    let counts = tower_counts(n);
    let mut fact = vec![1u128; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i as u128;
    }
    let binom = |m: usize, k: usize| -> u128 {
        (0..k).fold(1u128, |acc, i| acc * (m - i) as u128 / (i + 1) as u128)
    };
    let mut rest: Vec<usize> = (0..n).collect();
    let mut towers = Vec::new();
    while !rest.is_empty() {
        let m = rest.len();
        let mut r = rng.gen_range(0..counts[m]);
        let mut k = 1;
        loop {
            let w = binom(m - 1, k - 1) * fact[k] * counts[m - k];
            if r < w {
                break;
            }
            r -= w;
            k += 1;
        }
        let first = rest.remove(0);
        let mut others = rest.clone();
        shuffle(rng, &mut others);
        let mut tower: Vec<usize> = others[..k - 1].to_vec();
        tower.push(first);
        shuffle(rng, &mut tower);
        rest.retain(|b| !tower.contains(b));
        towers.push(tower);
    }
    towers
}

fn tower_atoms(towers: &[Vec<usize>], name: impl Fn(usize) -> String) -> Vec<(usize, String)> {
    let mut atoms = Vec::new();
    for t in towers {
        atoms.push((t[0], format!("(ontable {})", name(t[0]))));
        for w in t.windows(2) {
            atoms.push((w[1], format!("(on {} {})", name(w[1]), name(w[0]))));
        }
    }
    atoms.sort();
    atoms
}

pub struct BlocksworldGenerator;

impl InstanceGenerator for BlocksworldGenerator {
    fn domain(&self) -> &str {
        "blocksworld"
    }

    fn generate(&self, size: usize, seed: u64) -> GeneratedInstance {
        let mut rng = rng("blocksworld", size, seed);
        let name = |b: usize| format!("b{}", b + 1);
        let start = random_towers(&mut rng, size);
        let goal = random_towers(&mut rng, size);
        let mut init: Vec<String> = tower_atoms(&start, name)
            .into_iter()
            .map(|(_, a)| a)
            .collect();
        for t in &start {
            init.push(format!("(clear {})", name(*t.last().unwrap())));
        }
        init.push("(handempty)".into());
        // One atom per block, sorted by block, in one chain: tower after
        // tower, each from its bottom block up.
        let chains: Vec<Vec<usize>> = vec![goal.concat()];
        let goal: Vec<String> = tower_atoms(&goal, name)
            .into_iter()
            .map(|(_, a)| a)
            .collect();
        let pname = format!("bw-{size}-{seed}");
        let blocks = ((0..size).map(name).collect(), "block");
        let problem = problem_text(
            &pname,
            "blocksworld",
            &[blocks],
            &init,
            &goal,
            &chains,
            true,
        );
        GeneratedInstance {
            name: pname,
            problem,
        }
    }
}

pub struct LogisticsGenerator;

impl InstanceGenerator for LogisticsGenerator {
    fn domain(&self) -> &str {
        "logistics"
    }

    fn generate(&self, size: usize, seed: u64) -> GeneratedInstance {
        let mut rng = rng("logistics", size, seed);
        let cities = size.div_ceil(2).max(1);
        let city = |c: usize| format!("city{}", c + 1);
        let mut plain = Vec::new();
        let mut airports = Vec::new();
        let mut locations = Vec::new();
        let mut init = Vec::new();
        for c in 0..cities {
            for l in 1..=2 {
                let loc = format!("c{}-l{l}", c + 1);
                init.push(format!("(in-city {loc} {})", city(c)));
                plain.push(loc.clone());
                locations.push((loc, c));
            }
            let ap = format!("c{}-ap", c + 1);
            init.push(format!("(in-city {ap} {})", city(c)));
            airports.push(ap.clone());
            locations.push((ap, c));
        }
        let trucks: Vec<String> = (0..cities).map(|c| format!("truck{}", c + 1)).collect();
        for (c, t) in trucks.iter().enumerate() {
            let here: Vec<&String> = locations
                .iter()
                .filter(|l| l.1 == c)
                .map(|l| &l.0)
                .collect();
            init.push(format!("(at {t} {})", here[pick(&mut rng, here.len())]));
            init.push(format!("(empty {t})"));
        }
        let planes: Vec<String> = (1..=2).map(|i| format!("plane{i}")).collect();
        for a in &planes {
            init.push(format!(
                "(at {a} {})",
                airports[pick(&mut rng, airports.len())]
            ));
            init.push(format!("(empty {a})"));
        }
        let packages: Vec<String> = (1..=size).map(|i| format!("p{i}")).collect();
        let mut goal = Vec::new();
        for p in &packages {
            let from = pick(&mut rng, locations.len());
            let mut to = pick(&mut rng, locations.len() - 1);
            if to >= from {
                to += 1;
            }
            init.push(format!("(at {p} {})", locations[from].0));
            goal.push(format!("(at {p} {})", locations[to].0));
        }
        let pname = format!("logistics-{size}-{seed}");
        let objects = [
            (packages, "package"),
            (trucks, "truck"),
            (planes, "airplane"),
            (plain, "location"),
            (airports, "airport"),
            ((0..cities).map(city).collect(), "city"),
        ];
        // Packages are delivered one after another, in index order.
        let chain = vec![(0..size).collect::<Vec<_>>()];
        let problem = problem_text(&pname, "logistics", &objects, &init, &goal, &chain, false);
        GeneratedInstance {
            name: pname,
            problem,
        }
    }
}

pub struct DepotsGenerator;

const PLACES: [&str; 3] = ["depot0", "distributor0", "distributor1"];

/// Crates dropped one by one, in random order, onto a random main pallet's
/// stack.
struct Stacks {
    on: Vec<String>,
    at: Vec<String>,
    clear: Vec<String>,
    /// Crate indices per main pallet, bottom first.
    piles: Vec<Vec<usize>>,
}

fn depot_stacks(rng: &mut ChaCha8Rng, crates: usize) -> Stacks {
    let mut order: Vec<usize> = (0..crates).collect();
    shuffle(rng, &mut order);
    let mut piles = vec![Vec::new(); PLACES.len()];
    let mut on = vec![String::new(); crates];
    let mut at = vec![String::new(); crates];
    for c in order {
        let p = pick(rng, PLACES.len());
        let below = match piles[p].last() {
            Some(b) => format!("crate{b}"),
            None => format!("pallet{p}"),
        };
        on[c] = format!("(on crate{c} {below})");
        at[c] = format!("(at crate{c} {})", PLACES[p]);
        piles[p].push(c);
    }
    let clear = piles
        .iter()
        .enumerate()
        .map(|(p, pile)| match pile.last() {
            Some(c) => format!("(clear crate{c})"),
            None => format!("(clear pallet{p})"),
        })
        .collect();
    Stacks {
        on,
        at,
        clear,
        piles,
    }
}

impl InstanceGenerator for DepotsGenerator {
    fn domain(&self) -> &str {
        "depots"
    }

    fn generate(&self, size: usize, seed: u64) -> GeneratedInstance {
        let mut rng = rng("depots", size, seed);
        let mut init = Vec::new();
        for (p, place) in PLACES.iter().enumerate() {
            init.push(format!("(at pallet{p} {place})"));
            init.push(format!("(at hoist{p} {place})"));
            init.push(format!("(available hoist{p})"));
        }
        // Each place has one spare pallet, and every crate its own storage
        // pallet at the depot; all are empty at the start and in the goal.
        for (p, place) in PLACES.iter().enumerate() {
            let q = format!("pallet{}", PLACES.len() + p);
            init.push(format!("(at {q} {place})"));
            init.push(format!("(clear {q})"));
            init.push(format!("(spare {q})"));
        }
        let storage = |c: usize| format!("pallet{}", 2 * PLACES.len() + c);
        for c in 0..size {
            init.push(format!("(at {} {})", storage(c), PLACES[0]));
            init.push(format!("(clear {})", storage(c)));
            init.push(format!("(home crate{c} {})", storage(c)));
        }
        for t in 0..2 {
            init.push(format!(
                "(at truck{t} {})",
                PLACES[pick(&mut rng, PLACES.len())]
            ));
            init.push(format!("(empty truck{t})"));
        }
        let start = depot_stacks(&mut rng, size);
        init.extend(start.on);
        init.extend(start.at);
        init.extend(start.clear);
        let goal = depot_stacks(&mut rng, size);
        // Goal stacks are built one after another, each from the bottom.
        let chain = vec![goal.piles.concat()];
        let pname = format!("depots-{size}-{seed}");
        let objects = [
            (vec![PLACES[0].to_string()], "depot"),
            (
                PLACES[1..].iter().map(|s| s.to_string()).collect(),
                "distributor",
            ),
            ((0..2).map(|t| format!("truck{t}")).collect(), "truck"),
            (
                (0..2 * PLACES.len() + size)
                    .map(|p| format!("pallet{p}"))
                    .collect(),
                "pallet",
            ),
            (
                (0..PLACES.len()).map(|p| format!("hoist{p}")).collect(),
                "hoist",
            ),
            ((0..size).map(|c| format!("crate{c}")).collect(), "crate"),
        ];
        let problem = problem_text(&pname, "depots", &objects, &init, &goal.on, &chain, true);
        GeneratedInstance {
            name: pname,
            problem,
        }
    }
}

/// Generators by domain name.
pub struct GeneratorRegistry {
    generators: Vec<Box<dyn InstanceGenerator>>,
}

impl Default for GeneratorRegistry {
    fn default() -> Self {
        GeneratorRegistry {
            generators: vec![
                Box::new(BlocksworldGenerator),
                Box::new(LogisticsGenerator),
                Box::new(DepotsGenerator),
            ],
        }
    }
}

impl GeneratorRegistry {
    pub fn get(&self, domain: &str) -> Option<&dyn InstanceGenerator> {
        self.generators
            .iter()
            .find(|g| g.domain() == domain)
            .map(|g| g.as_ref())
    }

    pub fn domains(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.domain()).collect()
    }
}
