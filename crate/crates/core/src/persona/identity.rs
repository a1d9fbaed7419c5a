//! Procedural seed identities. A small built-in generator stands in for an
//! external fake-data library: every field is format-valid and a pure
//! function of the integer seed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::seed;

/// Ground-truth identity core of a synthetic human profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedIdentity {
    pub full_name: String,
    pub postal_address: String,
    pub date_of_birth: String,
    pub phone_number: String,
    pub credit_score: u16,
}

pub const FIRST_NAMES: [&str; 160] = [
    "Amara", "Felix", "Noor", "Dmitri", "Saoirse", "Kenji", "Lucia", "Omar", "Ingrid", "Tobias",
    "Priya", "Marcus", "Yuki", "Elena", "Rashid", "Greta", "Silas", "Amina", "Viktor", "Paloma",
    "Desmond", "Freya", "Hassan", "Iris", "Jasper", "Katya", "Leif", "Mireille", "Nikolai", "Odette",
    "Percival", "Quinn", "Rosalind", "Stellan", "Tamsin", "Ulysses", "Veda", "Wendell", "Ximena", "Yosef",
    "Zelda", "Ansel", "Beatrix", "Caspian", "Delphine", "Emory", "Farah", "Gideon", "Halina", "Idris",
    "Juniper", "Kofi", "Leonora", "Matthias", "Nadia", "Osric", "Petra", "Quentin", "Ramona", "Soren",
    "Thea", "Umberto", "Violeta", "Wallace", "Xavier", "Yvonne", "Zachary", "Astrid", "Bram", "Celeste",
    "Dario", "Esme", "Fergus", "Giselle", "Hugo", "Ilse", "Jonas", "Klara", "Lorenzo", "Maeve",
    "Nestor", "Ottilie", "Pavel", "Raisa", "Sebastian", "Tilda", "Uri", "Vera", "Wilhelm", "Xenia",
    "Yannick", "Zora", "Aldous", "Bianca", "Cormac", "Dagny", "Elias", "Fiona", "Gustav", "Hazel",
    "Ivo", "Jemima", "Kieran", "Livia", "Magnus", "Nerissa", "Orin", "Phoebe", "Rafael", "Sigrid",
    "Tristan", "Una", "Vance", "Willa", "Yara", "Zeno", "Arlo", "Blythe", "Cyrus", "Dahlia",
    "Edmund", "Flora", "Gareth", "Honora", "Ignatius", "Jolene", "Kai", "Lysandra", "Milo", "Nola",
    "Oberon", "Pilar", "Reuben", "Sabine", "Thaddeus", "Ursula", "Vito", "Winifred", "Yusuf", "Zinnia",
    "Alaric", "Bronwyn", "Callum", "Davina", "Everett", "Fenella", "Godfrey", "Henrietta", "Inigo", "Jocasta",
    "Kendrick", "Lavinia", "Mordecai", "Nimue", "Octavia", "Peregrine", "Rhiannon", "Sylvester", "Tatiana", "Vaughn",
];

const SURNAME_PREFIX: [&str; 40] = [
    "Ash", "Black", "Briar", "Cald", "Carr", "Clay", "Crest", "Dane", "Dray", "Elm",
    "Fair", "Fen", "Glen", "Gold", "Gray", "Hale", "Hart", "Haw", "Holm", "Iron",
    "Kel", "Lock", "Mar", "Mere", "North", "Oak", "Pem", "Quill", "Rath", "Sel",
    "Stone", "Thorn", "Under", "Vance", "Wald", "Well", "West", "Whit", "Wind", "Wren",
];

const SURNAME_SUFFIX: [&str; 40] = [
    "berry", "born", "bourne", "brook", "burn", "bury", "by", "combe", "cott", "croft",
    "dale", "den", "field", "ford", "forth", "gate", "grave", "grove", "ham", "haven",
    "hill", "holt", "hurst", "land", "leigh", "ley", "lock", "low", "man", "mere",
    "more", "ridge", "shaw", "stead", "ster", "stow", "thorpe", "ton", "well", "wood",
];

pub const CITIES: [&str; 32] = [
    "Arbor Falls", "Brightwater", "Cinder Bay", "Dunmore", "Eastvale", "Farrowgate",
    "Glimmerton", "Hollowbrook", "Ironvale", "Jasper Creek", "Kestrel Point", "Larkspur",
    "Mistral Heights", "Northgate", "Oakhaven", "Pinecrest", "Quarry Hill", "Ravenswood",
    "Silverbend", "Thornfield", "Umber Falls", "Vale City", "Westmere", "Yarrow Springs",
    "Ashford Mills", "Bellgrave", "Copper Hollow", "Driftwood", "Ember Lake", "Foxglove",
    "Granite Pass", "Harborview",
];

const STREET_NAMES: [&str; 24] = [
    "Alder", "Birchwood", "Cobblestone", "Dovetail", "Evergreen", "Foxtail",
    "Gable", "Heather", "Juniper", "Kingfisher", "Lilac", "Magnolia",
    "Nightingale", "Orchard", "Primrose", "Quartz", "Rosewood", "Sycamore",
    "Tamarack", "Vineyard", "Willowbrook", "Yellowstone", "Zephyr", "Bramble",
];

const STREET_TYPES: [&str; 6] = ["Street", "Avenue", "Lane", "Drive", "Court", "Road"];

const STATES: [&str; 16] = [
    "AZ", "CA", "CO", "FL", "GA", "IL", "MA", "MI", "NC", "NJ", "NY", "OH", "OR", "PA", "TX", "WA",
];

/// Reference year used to turn an age into a date of birth; fixed so the
/// generator stays a pure function of its seed.
const REFERENCE_YEAR: i32 = 2026;

/// Generate a seed identity deterministically from `rng_seed`.
///
/// Full names take the form "First Middle Last" with the surname drawn from
/// a compound pool; the combined name space (~40M combinations) keeps the
/// collision rate over 10k draws negligible. Phone numbers use the reserved
/// 555-01xx fictional range.
pub fn generate_seed_identity(rng_seed: u64) -> SeedIdentity {
    let mut rng = seed::rng(seed::derive(rng_seed, "seed-identity"));

    let first = FIRST_NAMES[rng.gen_range(0..FIRST_NAMES.len())];
    let middle = FIRST_NAMES[rng.gen_range(0..FIRST_NAMES.len())];
    let last = format!(
        "{}{}",
        SURNAME_PREFIX[rng.gen_range(0..SURNAME_PREFIX.len())],
        SURNAME_SUFFIX[rng.gen_range(0..SURNAME_SUFFIX.len())]
    );
    let full_name = format!("{first} {middle} {last}");

    let postal_address = format!(
        "{} {} {}, {}, {} {:05}",
        rng.gen_range(100..9900),
        STREET_NAMES[rng.gen_range(0..STREET_NAMES.len())],
        STREET_TYPES[rng.gen_range(0..STREET_TYPES.len())],
        CITIES[rng.gen_range(0..CITIES.len())],
        STATES[rng.gen_range(0..STATES.len())],
        rng.gen_range(10000..99999),
    );

    let age: i32 = rng.gen_range(18..=90);
    let date_of_birth = format!(
        "{:04}-{:02}-{:02}",
        REFERENCE_YEAR - age,
        rng.gen_range(1..=12),
        rng.gen_range(1..=28),
    );

    let phone_number = format!(
        "+1-{}{:02}-555-01{:02}",
        rng.gen_range(2..=9),
        rng.gen_range(0..=99),
        rng.gen_range(0..=99),
    );

    let credit_score: u16 = rng.gen_range(300..=850);

    SeedIdentity {
        full_name,
        postal_address,
        date_of_birth,
        phone_number,
        credit_score,
    }
}

impl SeedIdentity {
    /// Age implied by the date of birth at the fixed reference year.
    pub fn age(&self) -> i32 {
        let year: i32 = self.date_of_birth[..4].parse().unwrap_or(REFERENCE_YEAR);
        REFERENCE_YEAR - year
    }

    pub fn first_name(&self) -> &str {
        self.full_name.split(' ').next().unwrap_or(&self.full_name)
    }

    pub fn last_name(&self) -> &str {
        self.full_name.rsplit(' ').next().unwrap_or(&self.full_name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use regex::Regex;
    use std::collections::HashSet;

    #[test]
    fn deterministic_for_a_seed() {
        assert_eq!(generate_seed_identity(42), generate_seed_identity(42));
        assert_ne!(generate_seed_identity(42), generate_seed_identity(43));
    }

    #[test]
    fn fields_are_format_valid_over_many_seeds() {
        let phone = Regex::new(r"^\+1-[2-9]\d{2}-555-01\d{2}$").unwrap();
        let dob = Regex::new(r"^\d{4}-\d{2}-\d{2}$").unwrap();
        for s in 0..10_000u64 {
            let id = generate_seed_identity(s);
            assert!((300..=850).contains(&id.credit_score), "seed {s}");
            assert!(phone.is_match(&id.phone_number), "seed {s}: {}", id.phone_number);
            assert!(dob.is_match(&id.date_of_birth), "seed {s}");
            assert!((18..=90).contains(&id.age()), "seed {s}");
        }
    }

    // Collision-rate check for the name-pool construction: the pool sizes
    // were frozen only after this passed with margin.
    #[test]
    fn name_collisions_are_rare() {
        let names: HashSet<String> = (0..10_000u64)
            .map(|s| generate_seed_identity(s).full_name)
            .collect();
        assert!(names.len() >= 9_990, "distinct names: {}", names.len());
    }
}
