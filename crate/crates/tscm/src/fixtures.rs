//! Small networks shared by unit tests.

use rand::seq::index;
use rand::Rng;

use crate::metrics::Subspace;
use crate::netio::{AttributeKind, AttributeValue, AttributedNetwork};
use crate::rng::rng_from;

/// Random simple graph with `n` nodes, up to `m` distinct edges and `r`
/// attributes cycling through the three kinds. Ids are decimal indices.
pub fn random_network(seed: u64, n: usize, m: usize, r: usize) -> AttributedNetwork {
    let mut rng = rng_from(seed);
    let ids: Vec<String> = (0..n).map(|v| v.to_string()).collect();
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            edges.push((a, b));
        }
    }
    let kinds: Vec<AttributeKind> = (0..r)
        .map(|t| match t % 3 {
            0 => AttributeKind::numerical(format!("n{t}")),
            1 => AttributeKind::binary(format!("b{t}")),
            _ => AttributeKind::categorical(
                format!("c{t}"),
                (0..4).map(|c| format!("v{c}")).collect(),
            ),
        })
        .collect();
    let values = (0..n)
        .map(|_| {
            kinds
                .iter()
                .map(|k| match k.kind {
                    crate::netio::ValueKind::Numerical => {
                        AttributeValue::Numerical(rng.random::<f64>())
                    }
                    crate::netio::ValueKind::Binary => AttributeValue::Binary(rng.random_bool(0.5)),
                    crate::netio::ValueKind::Categorical => {
                        AttributeValue::Categorical(rng.random_range(0..4))
                    }
                })
                .collect()
        })
        .collect();
    AttributedNetwork::new(ids, edges, kinds, values).unwrap()
}

/// Random subspace with strictly positive weights.
pub fn random_subspace(seed: u64, r: usize) -> Subspace {
    let mut rng = rng_from(seed);
    let raw: Vec<f64> = (0..r).map(|_| rng.random::<f64>() + 0.05).collect();
    Subspace::from_unnormalized(&raw).unwrap()
}

/// Random subspace with roughly half the weights zeroed.
pub fn sparse_random_subspace(seed: u64, r: usize) -> Subspace {
    let mut rng = rng_from(seed);
    let keep = (r / 2).max(1);
    let chosen = index::sample(&mut rng, r, keep);
    let mut raw = vec![0.0; r];
    for i in chosen {
        raw[i] = rng.random::<f64>() + 0.05;
    }
    Subspace::from_unnormalized(&raw).unwrap()
}

/// Three categorical communities joined by a few bridges. Node ids are "1"
/// through "14": a 4-clique {1..4} sharing `music`, a middle group {5..10}
/// sharing `work` and `location`, and a 4-clique {11..14} sharing `sport`.
/// Node 5 also shares `music` with the left clique and node 10 shares
/// `sport` with the right one, so the two bridge nodes each see one
/// same-group and one cross-group neighborhood community.
pub fn three_group_toy() -> AttributedNetwork {
    let ids: Vec<String> = (1..=14).map(|v| v.to_string()).collect();
    let at = |a: usize, b: usize| (a - 1, b - 1);
    let mut edges = Vec::new();
    for (a, b) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
        edges.push(at(a, b));
    }
    for (a, b) in [
        (5, 6),
        (5, 7),
        (5, 8),
        (6, 7),
        (6, 8),
        (7, 8),
        (7, 9),
        (8, 9),
        (7, 10),
        (8, 10),
        (9, 10),
    ] {
        edges.push(at(a, b));
    }
    for (a, b) in [(11, 12), (11, 13), (11, 14), (12, 13), (12, 14), (13, 14)] {
        edges.push(at(a, b));
    }
    for (a, b) in [(3, 5), (4, 5), (10, 11), (10, 12)] {
        edges.push(at(a, b));
    }

    let mut domains: Vec<Vec<String>> = vec![Vec::new(); 4];
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); 14];
    let mut label = |t: usize, s: String| -> u32 {
        if let Some(i) = domains[t].iter().position(|x| *x == s) {
            return i as u32;
        }
        domains[t].push(s);
        (domains[t].len() - 1) as u32
    };
    // Columns: sport, music, work, location.
    for v in 1..=14usize {
        let sport = match v {
            10..=14 => "chess".to_string(),
            _ => format!("sport{v}"),
        };
        let music = match v {
            1..=5 => "jazz".to_string(),
            _ => format!("music{v}"),
        };
        let work = match v {
            5..=10 => "lab".to_string(),
            _ => format!("work{v}"),
        };
        let location = match v {
            5..=10 => "east".to_string(),
            _ => format!("loc{v}"),
        };
        rows[v - 1] = vec![
            label(0, sport),
            label(1, music),
            label(2, work),
            label(3, location),
        ];
    }

    let kinds = vec![
        AttributeKind::categorical("sport", domains[0].clone()),
        AttributeKind::categorical("music", domains[1].clone()),
        AttributeKind::categorical("work", domains[2].clone()),
        AttributeKind::categorical("location", domains[3].clone()),
    ];
    let values = rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(AttributeValue::Categorical)
                .collect::<Vec<_>>()
        })
        .collect();
    AttributedNetwork::new(ids, edges, kinds, values).unwrap()
}

/// Two 4-cliques joined by a single bridge edge. One numerical attribute
/// separates the cliques, so under the full subspace every internal edge
/// gets weight 1 and the bridge gets weight exp(-1).
pub fn two_cliques_bridge() -> AttributedNetwork {
    let ids: Vec<String> = (0..8).map(|v| v.to_string()).collect();
    let mut edges = Vec::new();
    for a in 0..4 {
        for b in (a + 1)..4 {
            edges.push((a, b));
            edges.push((a + 4, b + 4));
        }
    }
    edges.push((3, 4));
    let kinds = vec![AttributeKind::numerical("side")];
    let values = (0..8)
        .map(|v| vec![AttributeValue::Numerical(if v < 4 { 0.0 } else { 1.0 })])
        .collect();
    AttributedNetwork::new(ids, edges, kinds, values).unwrap()
}

/// Complete graph on `n` nodes whose nodes all share identical attributes.
pub fn homogeneous_clique(n: usize) -> AttributedNetwork {
    let ids: Vec<String> = (0..n).map(|v| v.to_string()).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            edges.push((a, b));
        }
    }
    let kinds = vec![
        AttributeKind::numerical("x"),
        AttributeKind::binary("y"),
        AttributeKind::categorical("z", vec!["only".into()]),
    ];
    let values = (0..n)
        .map(|_| {
            vec![
                AttributeValue::Numerical(1.0),
                AttributeValue::Binary(true),
                AttributeValue::Categorical(0),
            ]
        })
        .collect();
    AttributedNetwork::new(ids, edges, kinds, values).unwrap()
}

/// Star with `leaves` leaves around node 0; every node gets its own
/// categorical value so no two leaves look alike.
pub fn star(leaves: usize) -> AttributedNetwork {
    let n = leaves + 1;
    let ids: Vec<String> = (0..n).map(|v| v.to_string()).collect();
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
    let kinds = vec![AttributeKind::categorical(
        "tag",
        (0..n).map(|v| format!("t{v}")).collect(),
    )];
    let values = (0..n)
        .map(|v| vec![AttributeValue::Categorical(v as u32)])
        .collect();
    AttributedNetwork::new(ids, edges, kinds, values).unwrap()
}
