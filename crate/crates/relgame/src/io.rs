//! JSON file formats: games, relationship sets, and scenario specs.

use crate::game::{SocialCost, StaticGame, Tensor};
use crate::relationship::{NetworkSet, RelationshipType};
use crate::scenarios::{make_prisoners_dilemma, make_traffic_game, CarpoolTotal, DEFAULT_COEFFS};
use crate::{Error, Result};
use serde_json::{json, Value};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn get<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing key \"{key}\"")))
}

/// Flattens a nested cost array into row-major order, validating the shape.
/// `player` is the 1-based index used in diagnostics.
fn flatten_nested(v: &Value, shape: &[usize], out: &mut Vec<f64>, player: usize) -> Result<()> {
    match shape.split_first() {
        None => {
            let x = v.as_f64().ok_or_else(|| {
                parse_err(format!("player {player}: cost entry is not a number"))
            })?;
            out.push(x);
            Ok(())
        }
        Some((&k, rest)) => {
            let arr = v.as_array().ok_or_else(|| {
                parse_err(format!("player {player}: expected a nested array of depth {}", shape.len()))
            })?;
            if arr.len() != k {
                return Err(parse_err(format!(
                    "player {player}: cost array has length {} where {k} was expected",
                    arr.len()
                )));
            }
            for e in arr {
                flatten_nested(e, rest, out, player)?;
            }
            Ok(())
        }
    }
}

fn nest_flat(data: &[f64], shape: &[usize]) -> Value {
    match shape.split_first() {
        None => json!(data[0]),
        Some((&k, rest)) => {
            let stride = data.len() / k;
            Value::Array(
                (0..k).map(|a| nest_flat(&data[a * stride..(a + 1) * stride], rest)).collect(),
            )
        }
    }
}

/// Parses the game file format: `players`, `strategies` (label arrays),
/// `costs` (player-major nested arrays, player 1 outermost), and optional
/// `social_cost` ("sum" or an explicit nested array).
pub fn parse_game(text: &str) -> Result<(StaticGame, SocialCost)> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
    let players = get(&root, "players")?
        .as_u64()
        .ok_or_else(|| parse_err("\"players\" must be a positive integer"))?
        as usize;
    let strategies = get(&root, "strategies")?
        .as_array()
        .ok_or_else(|| parse_err("\"strategies\" must be an array of label arrays"))?;
    if strategies.len() != players {
        return Err(parse_err(format!(
            "\"strategies\" lists {} players, \"players\" says {players}",
            strategies.len()
        )));
    }
    let mut labels: Vec<Vec<String>> = Vec::with_capacity(players);
    for (i, entry) in strategies.iter().enumerate() {
        let arr = entry
            .as_array()
            .ok_or_else(|| parse_err(format!("player {}: strategy labels must be an array", i + 1)))?;
        let lab = arr
            .iter()
            .map(|s| {
                s.as_str().map(String::from).ok_or_else(|| {
                    parse_err(format!("player {}: strategy labels must be strings", i + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if lab.is_empty() {
            return Err(parse_err(format!("player {}: empty strategy set", i + 1)));
        }
        labels.push(lab);
    }
    let shape: Vec<usize> = labels.iter().map(Vec::len).collect();

    let costs = get(&root, "costs")?
        .as_array()
        .ok_or_else(|| parse_err("\"costs\" must be an array with one entry per player"))?;
    if costs.len() != players {
        return Err(parse_err(format!(
            "\"costs\" has {} entries, \"players\" says {players}",
            costs.len()
        )));
    }
    let mut tensors = Vec::with_capacity(players);
    for (i, entry) in costs.iter().enumerate() {
        let mut flat = Vec::with_capacity(shape.iter().product());
        flatten_nested(entry, &shape, &mut flat, i + 1)?;
        tensors.push(Tensor::new(shape.clone(), flat)?);
    }
    let g = StaticGame::new(tensors)?.with_labels(labels)?;

    let v = match root.get("social_cost") {
        None => SocialCost::SumOfPlayerCosts,
        Some(Value::String(s)) if s == "sum" => SocialCost::SumOfPlayerCosts,
        Some(Value::String(s)) => {
            return Err(parse_err(format!("unknown \"social_cost\" mode \"{s}\"")))
        }
        Some(nested) => {
            let mut flat = Vec::with_capacity(shape.iter().product());
            // diagnostics attribute explicit social cost to "player 0"
            flatten_nested(nested, &shape, &mut flat, 0)?;
            SocialCost::Explicit(Tensor::new(shape.clone(), flat)?)
        }
    };
    Ok((g, v))
}

/// Serializes a game (and non-default social cost) back to the file format.
pub fn game_to_json(g: &StaticGame, v: &SocialCost) -> String {
    let labels: Vec<Vec<String>> = match g.strategy_labels() {
        Some(l) => l.to_vec(),
        None => g
            .strategy_counts()
            .iter()
            .map(|&k| (1..=k).map(|s| s.to_string()).collect())
            .collect(),
    };
    let mut root = json!({
        "players": g.num_players(),
        "strategies": labels,
        "costs": g
            .cost_tensors()
            .iter()
            .map(|t| nest_flat(t.data(), t.shape()))
            .collect::<Vec<_>>(),
    });
    match v {
        SocialCost::SumOfPlayerCosts => {
            root["social_cost"] = json!("sum");
        }
        SocialCost::Explicit(t) => {
            root["social_cost"] = nest_flat(t.data(), t.shape());
        }
    }
    serde_json::to_string_pretty(&root).expect("serialization cannot fail")
}

/// Parses a relationship-set spec: `{"type": "individual" | "all_people" |
/// "reciprocity"}` or `{"type": "custom", "networks": [n×n arrays]}`.
pub fn parse_relationships(text: &str, n: usize) -> Result<NetworkSet> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
    let tag = get(&root, "type")?
        .as_str()
        .ok_or_else(|| parse_err("\"type\" must be a string"))?;
    match tag {
        "individual" => NetworkSet::by_type(RelationshipType::Individual, n),
        "all_people" => NetworkSet::by_type(RelationshipType::AllPeople, n),
        "reciprocity" => NetworkSet::by_type(RelationshipType::Reciprocity, n),
        "custom" => {
            let nets = get(&root, "networks")?
                .as_array()
                .ok_or_else(|| parse_err("\"networks\" must be an array of n×n matrices"))?;
            let mut flat_nets = Vec::with_capacity(nets.len());
            for (r, net) in nets.iter().enumerate() {
                let mut flat = Vec::with_capacity(n * n);
                flatten_nested(net, &[n, n], &mut flat, 0).map_err(|e| {
                    parse_err(format!("network {}: {e}", r + 1))
                })?;
                flat_nets.push(flat);
            }
            NetworkSet::custom(n, flat_nets)
        }
        other => Err(parse_err(format!(
            "unknown relationship type \"{other}\" (expected individual, all_people, reciprocity, or custom)"
        ))),
    }
}

/// Parses a scenario spec and builds the game. `carpool_total` accepts a
/// number, "paper_table" (5n/3), or "paper_text" (2.5n).
pub fn parse_scenario(text: &str) -> Result<StaticGame> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
    let scenario = get(&root, "scenario")?
        .as_str()
        .ok_or_else(|| parse_err("\"scenario\" must be a string"))?;
    match scenario {
        "prisoners_dilemma" => Ok(make_prisoners_dilemma()),
        "traffic" => {
            let n = get(&root, "n")?
                .as_u64()
                .ok_or_else(|| parse_err("\"n\" must be a positive integer"))?
                as usize;
            let routes = match root.get("routes") {
                None => 2,
                Some(v) => {
                    v.as_u64().ok_or_else(|| parse_err("\"routes\" must be a positive integer"))?
                        as usize
                }
            };
            let carpool = match root.get("carpool_total") {
                None => CarpoolTotal::TableConsistent,
                Some(Value::String(s)) if s == "paper_table" => CarpoolTotal::TableConsistent,
                Some(Value::String(s)) if s == "paper_text" => CarpoolTotal::TextStated,
                Some(v) => CarpoolTotal::Fixed(v.as_f64().ok_or_else(|| {
                    parse_err("\"carpool_total\" must be a number, \"paper_table\", or \"paper_text\"")
                })?),
            };
            let coeffs: Vec<f64> = match root.get("coeffs") {
                None => DEFAULT_COEFFS.to_vec(),
                Some(v) => v
                    .as_array()
                    .ok_or_else(|| parse_err("\"coeffs\" must be an array of numbers"))?
                    .iter()
                    .map(|c| {
                        c.as_f64().ok_or_else(|| parse_err("\"coeffs\" must be an array of numbers"))
                    })
                    .collect::<Result<Vec<_>>>()?,
            };
            make_traffic_game(n, routes, carpool, &coeffs)
        }
        other => Err(parse_err(format!(
            "unknown scenario \"{other}\" (expected traffic or prisoners_dilemma)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{enumerate_pure_nash, social_cost, PureProfile};
    use crate::scenarios::default_traffic_game;

    const PD: &str = r#"{
        "players": 2,
        "strategies": [["C", "D"], ["C", "D"]],
        "costs": [[[1, 3], [0, 2]], [[1, 0], [3, 2]]]
    }"#;

    #[test]
    fn game_round_trip() {
        let (g, v) = parse_game(PD).unwrap();
        assert_eq!(g.num_players(), 2);
        assert_eq!(g.strategy_counts(), &[2, 2]);
        let dd = PureProfile::from_one_based(&[2, 2]).unwrap();
        assert!((social_cost(&g, &v, &dd).unwrap() - 4.0).abs() < 1e-12);
        let (g2, _) = parse_game(&game_to_json(&g, &v)).unwrap();
        for i in 0..2 {
            assert_eq!(g.cost_tensor(i).data(), g2.cost_tensor(i).data());
        }
    }

    #[test]
    fn missing_key_is_named() {
        let err = parse_game(r#"{"players": 2}"#).unwrap_err();
        assert!(err.to_string().contains("\"strategies\""), "{err}");
    }

    #[test]
    fn cost_shape_error_names_player() {
        let bad = r#"{
            "players": 2,
            "strategies": [["C", "D"], ["C", "D"]],
            "costs": [[[1, 3], [0, 2]], [[1, 0, 9], [3, 2]]]
        }"#;
        let err = parse_game(bad).unwrap_err();
        assert!(err.to_string().contains("player 2"), "{err}");
    }

    #[test]
    fn explicit_social_cost_tensor() {
        let text = r#"{
            "players": 2,
            "strategies": [["a", "b"], ["a", "b"]],
            "costs": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]],
            "social_cost": [[5, 1], [2, 0]]
        }"#;
        let (g, v) = parse_game(text).unwrap();
        let p = PureProfile::from_one_based(&[1, 2]).unwrap();
        assert!((social_cost(&g, &v, &p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn relationship_specs() {
        assert_eq!(parse_relationships(r#"{"type": "individual"}"#, 3).unwrap().len(), 6);
        assert_eq!(parse_relationships(r#"{"type": "all_people"}"#, 3).unwrap().len(), 3);
        assert_eq!(parse_relationships(r#"{"type": "reciprocity"}"#, 3).unwrap().len(), 3);
        let custom = r#"{"type": "custom", "networks": [[[0, 1], [0, 0]]]}"#;
        assert_eq!(parse_relationships(custom, 2).unwrap().len(), 1);
        assert!(parse_relationships(r#"{"type": "nope"}"#, 2).is_err());
        assert!(parse_relationships(r#"{"type": "custom"}"#, 2)
            .unwrap_err()
            .to_string()
            .contains("\"networks\""));
    }

    #[test]
    fn scenario_specs() {
        let g = parse_scenario(r#"{"scenario": "traffic", "n": 3}"#).unwrap();
        let reference = default_traffic_game(3).unwrap();
        for i in 0..3 {
            assert_eq!(g.cost_tensor(i).data(), reference.cost_tensor(i).data());
        }
        let pd = parse_scenario(r#"{"scenario": "prisoners_dilemma"}"#).unwrap();
        assert_eq!(enumerate_pure_nash(&pd).unwrap().len(), 1);
        let fixed =
            parse_scenario(r#"{"scenario": "traffic", "n": 2, "carpool_total": 8.0}"#).unwrap();
        let all_a = PureProfile::from_one_based(&[1, 1]).unwrap();
        assert!((fixed.cost_tensor(0).get(all_a.zero_based()) - 4.0).abs() < 1e-12);
        assert!(parse_scenario(r#"{"scenario": "traffic"}"#)
            .unwrap_err()
            .to_string()
            .contains("\"n\""));
    }
}
