//! Deterministic stand-ins for the model-backed generators, so the whole
//! pipeline runs with no model: procedural human profiles from a fixed
//! attribute-key inventory, and pool-based agent personas.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use std::collections::BTreeMap;

use super::domain::PrivacyDomain;
use super::identity::{SeedIdentity, CITIES, FIRST_NAMES};
use super::profile::{AgentPersona, Attribute, HumanProfile};
use crate::seed;

/// Target attribute count and spread for generated profiles.
pub const ATTR_COUNT_MEAN: f64 = 97.0;
pub const ATTR_COUNT_STD: f64 = 16.0;
pub const ATTR_COUNT_MIN: usize = 60;
pub const ATTR_COUNT_MAX: usize = 140;

const BANKS: [&str; 10] = [
    "Meridian Trust Bank", "Harborline Savings", "First Cobalt Credit Union",
    "Lantern Mutual Bank", "Bluegranite Financial", "Summit Pike Bank",
    "Coastal Fern Savings", "Ironbridge National", "Vantage Row Bank", "Oakledger Trust",
];

const EMPLOYERS: [&str; 14] = [
    "Stellar Freight Group", "Marrow & Pine Design", "Cobalt Orchard Labs",
    "Halcyon Grid Energy", "Brightcap Analytics", "Fernwhistle Press",
    "Quarryline Robotics", "Tidewater Logistics", "Ambergate Biotech",
    "Northloom Textiles", "Silverthread Software", "Crestfall Insurance",
    "Peregrine Catering Co", "Mossbank Architecture",
];

const JOB_TITLES: [&str; 12] = [
    "supply chain analyst", "senior copy editor", "field service technician",
    "clinical data coordinator", "landscape architect", "paralegal assistant",
    "warehouse shift lead", "UX researcher", "actuarial associate",
    "facilities manager", "pastry chef", "QA automation engineer",
];

const CONDITIONS: [&str; 10] = [
    "type 2 diabetes", "chronic migraine disorder", "mild asthma",
    "hypothyroidism", "psoriatic arthritis", "celiac disease",
    "hypertension stage 1", "iron-deficiency anemia", "plantar fasciitis",
    "seasonal allergic rhinitis",
];

const MEDICATIONS: [&str; 10] = [
    "metformin 500mg", "sumatriptan 50mg", "levothyroxine 75mcg",
    "albuterol inhaler", "lisinopril 10mg", "sertraline 100mg",
    "omeprazole 20mg", "atorvastatin 40mg", "montelukast 10mg", "buspirone 15mg",
];

const MH_DIAGNOSES: [&str; 8] = [
    "generalized anxiety disorder", "recurrent major depression",
    "panic disorder", "adult ADHD inattentive type", "social anxiety disorder",
    "post-traumatic stress disorder", "obsessive-compulsive tendencies",
    "seasonal affective disorder",
];

const LAW_FIRMS: [&str; 8] = [
    "Calloway & Brim LLP", "Hartwell Legal Group", "Strand and Mercer",
    "Quayside Law Offices", "Fenwick Harbor Associates", "Dunmore Whitfield LLP",
    "Ravenscroft Counsel", "Pellham Drake Partners",
];

const UNIVERSITIES: [&str; 10] = [
    "Dunmore State University", "Harborview College", "Westmere Institute of Technology",
    "Larkspur Community College", "Ravenswood University", "Silverbend Polytechnic",
    "Oakhaven Liberal Arts College", "Granite Pass State", "Vale City University",
    "Thornfield A&M",
];

const DEGREES: [&str; 10] = [
    "BS in environmental engineering", "BA in comparative literature",
    "MS in applied statistics", "BFA in industrial design", "BS in nursing",
    "MBA in operations", "BA in economics", "MS in library science",
    "BS in horticulture", "MA in linguistics",
];

const PET_NAMES: [&str; 12] = [
    "Biscuit", "Mochi", "Clementine", "Waffles", "Juniper", "Bandit",
    "Pickles", "Nimbus", "Tater", "Marzipan", "Sprocket", "Olive",
];

const HOBBY_SLOTS: [&str; 10] = [
    "pottery class", "bouldering session", "community garden shift",
    "chess club meetup", "swing dance lesson", "birdwatching walk",
    "woodworking workshop", "trivia night", "open mic rehearsal", "kayak club",
];

const WEEKDAYS: [&str; 7] = [
    "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday",
];

const MONTHS: [&str; 12] = [
    "January", "February", "March", "April", "May", "June", "July", "August",
    "September", "October", "November", "December",
];

fn pick<'a>(rng: &mut impl Rng, pool: &[&'a str]) -> &'a str {
    pool[rng.gen_range(0..pool.len())]
}

fn money(rng: &mut impl Rng, lo: u32, hi: u32) -> String {
    format!("${}", rng.gen_range(lo..hi))
}

fn day_month(rng: &mut impl Rng) -> String {
    format!("{} {}", pick(rng, &MONTHS), rng.gen_range(1..=28))
}

fn time_slot(rng: &mut impl Rng) -> String {
    format!("{}:{:02}{}", rng.gen_range(1..=11), 15 * rng.gen_range(0..4),
        if rng.gen_bool(0.5) { "am" } else { "pm" })
}

fn person(rng: &mut impl Rng) -> String {
    FIRST_NAMES[rng.gen_range(0..FIRST_NAMES.len())].to_string()
}

/// Full attribute inventory: 14 keys per domain, 140 total. Values are
/// filled from the seed identity and seeded pools; each is a concrete,
/// specific string.
fn inventory(seed_id: &SeedIdentity, rng: &mut impl Rng) -> Vec<(PrivacyDomain, String, String)> {
    use PrivacyDomain::*;
    let first = seed_id.first_name().to_string();
    let city = pick(rng, &CITIES).to_string();
    let mut out: Vec<(PrivacyDomain, &str, String)> = Vec::with_capacity(140);

    let email_domain = ["lumenmail", "hexpost", "quillbox", "driftmail"][rng.gen_range(0..4)];
    out.extend([
        (GeneralIdentity, "full_name", seed_id.full_name.clone()),
        (GeneralIdentity, "date_of_birth", seed_id.date_of_birth.clone()),
        (GeneralIdentity, "phone_number", seed_id.phone_number.clone()),
        (GeneralIdentity, "personal_email", format!(
            "{}.{}{}@{}.example",
            first.to_lowercase(),
            seed_id.last_name().to_lowercase(),
            rng.gen_range(10..99),
            email_domain,
        )),
        (GeneralIdentity, "birthplace", format!("{city} municipal hospital")),
        (GeneralIdentity, "nickname", format!("{}ster", &first[..first.len().min(4)])),
        (GeneralIdentity, "mothers_maiden_name", format!("{}", person(rng))),
        (GeneralIdentity, "height", format!("{} ft {} in", rng.gen_range(4..=6), rng.gen_range(0..12))),
        (GeneralIdentity, "eye_color", ["hazel brown", "slate gray", "deep green", "amber brown"][rng.gen_range(0..4)].to_string()),
        (GeneralIdentity, "drivers_license_state", seed_id.postal_address.rsplit(", ").next().unwrap_or("CA 00000").to_string()),
        (GeneralIdentity, "social_handle", format!("@{}_{}{}", first.to_lowercase(), pick(rng, &["nomad", "sketch", "echo", "drift"]), rng.gen_range(10..99))),
        (GeneralIdentity, "blood_donor_id", format!("BD-{}", rng.gen_range(100_000..999_999))),
        (GeneralIdentity, "passport_issue_year", format!("{}", rng.gen_range(2015..2025))),
        (GeneralIdentity, "home_city", city.clone()),
    ].map(|(d, k, v)| (d, k, v)));

    out.extend([
        (Finance, "credit_score", seed_id.credit_score.to_string()),
        (Finance, "primary_bank", pick(rng, &BANKS).to_string()),
        (Finance, "annual_salary", money(rng, 38_000, 160_000)),
        (Finance, "savings_balance", money(rng, 1_200, 80_000)),
        (Finance, "credit_card_issuer", format!("{} rewards card", pick(rng, &BANKS))),
        (Finance, "outstanding_debt", money(rng, 2_000, 45_000)),
        (Finance, "monthly_loan_payment", money(rng, 150, 900)),
        (Finance, "retirement_fund", format!("{} 401k at {}", money(rng, 8_000, 220_000), pick(rng, &BANKS))),
        (Finance, "investment_platform", pick(rng, &["Ledgerleaf Invest", "Copperwheel Brokerage", "Tidemark Funds", "Arrowgrain Capital"]).to_string()),
        (Finance, "tax_filing_status", pick(rng, &["single filer", "married filing jointly", "head of household"]).to_string()),
        (Finance, "insurance_provider", pick(rng, &["Crestfall Insurance", "Bulwark Mutual", "Harborline Assurance"]).to_string()),
        (Finance, "last_large_purchase", format!("{} for a used {}", money(rng, 900, 9_000), pick(rng, &["sedan", "e-bike", "camper trailer", "upright piano"]))),
        (Finance, "monthly_subscriptions", money(rng, 40, 220)),
        (Finance, "emergency_fund_goal", money(rng, 5_000, 30_000)),
    ].map(|(d, k, v)| (d, k, v)));

    out.extend([
        (Health, "primary_condition", pick(rng, &CONDITIONS).to_string()),
        (Health, "daily_medication", pick(rng, &MEDICATIONS).to_string()),
        (Health, "allergy", pick(rng, &["penicillin", "tree nuts", "shellfish", "bee stings", "latex gloves"]).to_string()),
        (Health, "blood_type", pick(rng, &["A positive", "O negative", "B positive", "AB negative"]).to_string()),
        (Health, "primary_physician", format!("Dr. {} {}", person(rng), pick(rng, &["Okafor", "Linden", "Marsh", "Voss"]))),
        (Health, "last_procedure", pick(rng, &["wisdom tooth extraction", "knee arthroscopy", "gallbladder removal", "LASIK surgery"]).to_string()),
        (Health, "dietary_restriction", pick(rng, &["strict gluten-free diet", "low-sodium diet", "lactose-free diet", "low-FODMAP diet"]).to_string()),
        (Health, "vision_prescription", format!("-{}.{} diopters both eyes", rng.gen_range(1..6), 25 * rng.gen_range(0..4))),
        (Health, "health_insurance_plan", format!("{} silver plan", pick(rng, &["Bulwark Mutual", "Harborline Assurance", "Crestfall Insurance"]))),
        (Health, "physical_therapy", format!("{} sessions for {}", rng.gen_range(4..16), pick(rng, &["rotator cuff strain", "lower back pain", "sprained ankle"]))),
        (Health, "resting_heart_rate", format!("{} bpm resting", rng.gen_range(52..88))),
        (Health, "specialist_referral", format!("{} referral pending", pick(rng, &["dermatology", "cardiology", "gastroenterology", "endocrinology"]))),
        (Health, "immunization_due", format!("tetanus booster due {}", day_month(rng))),
        (Health, "pharmacy", format!("{} pharmacy on {} Street", city.clone(), person(rng))),
    ].map(|(d, k, v)| (d, k, v)));

    out.extend([
        (MentalHealth, "diagnosis", pick(rng, &MH_DIAGNOSES).to_string()),
        (MentalHealth, "therapist_name", format!("{} {}, LCSW", person(rng), pick(rng, &["Abbott", "Reyes", "Kimura", "Sandoval"]))),
        (MentalHealth, "therapy_schedule", format!("{} at {}", pick(rng, &WEEKDAYS), time_slot(rng))),
        (MentalHealth, "psych_medication", pick(rng, &["sertraline 100mg", "buspirone 15mg", "lamotrigine 200mg", "escitalopram 10mg"]).to_string()),
        (MentalHealth, "coping_strategy", pick(rng, &["box breathing before meetings", "cold water face dips", "long walks with podcasts", "grounding with five senses"]).to_string()),
        (MentalHealth, "stress_trigger", pick(rng, &["crowded commuter trains", "surprise deadline changes", "family holiday dinners", "public speaking"]).to_string()),
        (MentalHealth, "support_group", format!("{} peer group, {} evenings", city.clone(), pick(rng, &WEEKDAYS))),
        (MentalHealth, "last_episode", format!("panic episode in {}", day_month(rng))),
        (MentalHealth, "mindfulness_app", pick(rng, &["Stillwater app", "Quiet Harbor app", "Evenkeel app"]).to_string()),
        (MentalHealth, "journaling_habit", format!("journals {} mornings a week", rng.gen_range(2..7))),
        (MentalHealth, "counselor_practice", format!("{} Counseling Collective", city.clone())),
        (MentalHealth, "sleep_pattern", format!("insomnia flare-ups, about {} hours a night", rng.gen_range(4..7))),
        (MentalHealth, "crisis_contact", format!("sister {} is the crisis contact", person(rng))),
        (MentalHealth, "burnout_leave", format!("{} weeks of burnout leave in {}", rng.gen_range(2..8), 2020 + rng.gen_range(0..6))),
    ].map(|(d, k, v)| (d, k, v)));

    out.extend([
        (Legal, "pending_matter", pick(rng, &["small claims dispute with a contractor", "contested parking citation", "insurance claim arbitration", "boundary fence dispute"]).to_string()),
        (Legal, "attorney_name", format!("{} {}, Esq.", person(rng), pick(rng, &["Calloway", "Mercer", "Whitfield", "Drake"]))),
        (Legal, "law_firm", pick(rng, &LAW_FIRMS).to_string()),
        (Legal, "court_date", format!("hearing on {}", day_month(rng))),
        (Legal, "settlement_amount", format!("{} settlement offer", money(rng, 1_500, 40_000))),
        (Legal, "traffic_citation", format!("speeding citation #{}", rng.gen_range(100_000..999_999))),
        (Legal, "will_status", format!("will drafted {} but unsigned", 2019 + rng.gen_range(0..7))),
        (Legal, "power_of_attorney", format!("POA granted to {}", person(rng))),
        (Legal, "prior_offense", pick(rng, &["expunged misdemeanor trespass", "dismissed noise complaint", "juvenile shoplifting record"]).to_string()),
        (Legal, "immigration_status", pick(rng, &["naturalized citizen since 2014", "permanent resident, renewal due", "work visa holder"]).to_string()),
        (Legal, "jury_duty", format!("jury summons for {}", day_month(rng))),
        (Legal, "lease_dispute", format!("security deposit dispute, {} withheld", money(rng, 400, 2_400))),
        (Legal, "notary_appointment", format!("{} at {} notary office", day_month(rng), city.clone())),
        (Legal, "custody_agreement", pick(rng, &["shared custody alternating weeks", "no custody matters", "guardianship of a nephew"]).to_string()),
    ].map(|(d, k, v)| (d, k, v)));

    out.extend([
        (Relationships, "partner_name", format!("partner {}", person(rng))),
        (Relationships, "relationship_status", pick(rng, &["engaged for two years", "recently separated", "long-distance relationship", "happily single"]).to_string()),
        (Relationships, "anniversary", day_month(rng)),
        (Relationships, "ex_partner_name", format!("ex {}", person(rng))),
        (Relationships, "best_friend", person(rng)),
        (Relationships, "child_name", format!("{}, age {}", person(rng), rng.gen_range(1..17))),
        (Relationships, "parent_name", format!("mother {}", person(rng))),
        (Relationships, "sibling_name", format!("brother {}", person(rng))),
        (Relationships, "pet_name", format!("{} the {}", pick(rng, &PET_NAMES), pick(rng, &["corgi", "tabby cat", "cockatiel", "leopard gecko", "lop rabbit"]))),
        (Relationships, "family_conflict", pick(rng, &["estranged from an uncle over inheritance", "tension with in-laws about holidays", "sibling feud over the family cabin"]).to_string()),
        (Relationships, "dating_app", pick(rng, &["Emberline", "Lattice Hearts", "Orchard Match"]).to_string()),
        (Relationships, "emergency_contact", format!("{} ({})", person(rng), pick(rng, &["spouse", "roommate", "cousin"]))),
        (Relationships, "roommate_name", person(rng)),
        (Relationships, "godparent_of", format!("goddaughter {}", person(rng))),
    ].map(|(d, k, v)| (d, k, v)));

    out.extend([
        (Housing, "home_address", seed_id.postal_address.clone()),
        (Housing, "residence_type", pick(rng, &["two-bedroom walk-up", "detached bungalow", "studio loft", "duplex with a shared yard"]).to_string()),
        (Housing, "landlord_name", format!("landlord {} {}", person(rng), pick(rng, &["Pemberton", "Holloway", "Garvey"]))),
        (Housing, "monthly_rent", money(rng, 850, 3_400)),
        (Housing, "mortgage_lender", pick(rng, &BANKS).to_string()),
        (Housing, "move_in_date", format!("moved in {} {}", pick(rng, &MONTHS), 2017 + rng.gen_range(0..9))),
        (Housing, "neighborhood", format!("{} district of {}", pick(rng, &["old mill", "riverside", "orchard hill", "station south"]), city.clone())),
        (Housing, "hoa_fee", format!("{} quarterly HOA fee", money(rng, 120, 800))),
        (Housing, "gate_code", format!("building gate code {}", rng.gen_range(1000..9999))),
        (Housing, "renovation_project", pick(rng, &["gut-renovating the kitchen", "converting the garage to a studio", "replacing knob-and-tube wiring"]).to_string()),
        (Housing, "utility_provider", format!("{} Power & Light", city.clone())),
        (Housing, "property_value", format!("appraised at {}", money(rng, 180_000, 720_000))),
        (Housing, "previous_city", pick(rng, &CITIES).to_string()),
        (Housing, "lease_end", format!("lease ends {}", day_month(rng))),
    ].map(|(d, k, v)| (d, k, v)));

    out.extend([
        (Employment, "employer", pick(rng, &EMPLOYERS).to_string()),
        (Employment, "job_title", pick(rng, &JOB_TITLES).to_string()),
        (Employment, "manager_name", format!("manager {}", person(rng))),
        (Employment, "work_email", format!("{}.{}@{}.example", first.to_lowercase(), seed_id.last_name().to_lowercase(), pick(rng, &["corp", "team", "office"]))),
        (Employment, "salary_band", format!("band {} ({})", rng.gen_range(3..9), money(rng, 40_000, 150_000))),
        (Employment, "start_date", format!("started {} {}", pick(rng, &MONTHS), 2015 + rng.gen_range(0..11))),
        (Employment, "office_location", format!("{} office, floor {}", city.clone(), rng.gen_range(1..12))),
        (Employment, "team_name", format!("{} team", pick(rng, &["fulfillment", "platform reliability", "client success", "field ops"]))),
        (Employment, "performance_rating", pick(rng, &["exceeds expectations", "meets expectations", "on a performance plan"]).to_string()),
        (Employment, "side_gig", pick(rng, &["weekend farmers market stall", "freelance copyediting", "rideshare driving on Fridays", "Etsy ceramics shop"]).to_string()),
        (Employment, "work_schedule", format!("{} through {}, {} start", pick(rng, &WEEKDAYS[..2]), pick(rng, &WEEKDAYS[3..5]), time_slot(rng))),
        (Employment, "badge_number", format!("badge {}", rng.gen_range(10_000..99_999))),
        (Employment, "pending_change", pick(rng, &["promotion case under review", "transfer request to the coast office", "quietly interviewing elsewhere"]).to_string()),
        (Employment, "union_membership", format!("local {} member", rng.gen_range(100..999))),
    ].map(|(d, k, v)| (d, k, v)));

    out.extend([
        (Education, "university", pick(rng, &UNIVERSITIES).to_string()),
        (Education, "degree", pick(rng, &DEGREES).to_string()),
        (Education, "graduation_year", format!("class of {}", 2005 + rng.gen_range(0..18))),
        (Education, "gpa", format!("{}.{} GPA", rng.gen_range(2..4), rng.gen_range(10..99))),
        (Education, "high_school", format!("{} High School", pick(rng, &CITIES))),
        (Education, "certification", pick(rng, &["PMP certification", "wilderness first responder cert", "CPA license", "forklift operator license"]).to_string()),
        (Education, "student_loan_balance", format!("{} in student loans", money(rng, 4_000, 90_000))),
        (Education, "thesis_topic", pick(rng, &["thesis on watershed restoration", "thesis on dialect shift in port towns", "capstone on cold-chain logistics"]).to_string()),
        (Education, "night_class", format!("{} night class on {}", pick(rng, &["ceramics", "statistics", "Portuguese", "welding"]), pick(rng, &WEEKDAYS))),
        (Education, "advisor_name", format!("advisor Prof. {}", person(rng))),
        (Education, "scholarship", format!("{} merit scholarship", pick(rng, &UNIVERSITIES))),
        (Education, "academic_record", pick(rng, &["dean's list twice", "one semester on academic probation", "transferred after freshman year"]).to_string()),
        (Education, "study_abroad", format!("semester abroad in {}", pick(rng, &["Lisbon", "Osaka", "Tallinn", "Valparaiso"]))),
        (Education, "continuing_ed", format!("evening certificate at {}", pick(rng, &UNIVERSITIES))),
    ].map(|(d, k, v)| (d, k, v)));

    out.extend([
        (Scheduling, "weekly_commitment", format!("{} every {}", pick(rng, &HOBBY_SLOTS), pick(rng, &WEEKDAYS))),
        (Scheduling, "gym_time", format!("gym at {} on {}s", time_slot(rng), pick(rng, &WEEKDAYS))),
        (Scheduling, "commute_window", format!("{} minute commute leaving at {}", rng.gen_range(10..75), time_slot(rng))),
        (Scheduling, "standing_meeting", format!("standup at {} every weekday", time_slot(rng))),
        (Scheduling, "travel_plan", format!("flying to {} on {}", pick(rng, &CITIES), day_month(rng))),
        (Scheduling, "vacation_dates", format!("vacation {} through {}", day_month(rng), day_month(rng))),
        (Scheduling, "medical_appointment", format!("checkup on {} at {}", day_month(rng), time_slot(rng))),
        (Scheduling, "recurring_reminder", format!("meds reminder at {} daily", time_slot(rng))),
        (Scheduling, "weekend_routine", pick(rng, &["Saturday farmers market then laundry", "Sunday long run at dawn", "Saturday morning food bank shift"]).to_string()),
        (Scheduling, "volunteer_shift", format!("{} shelter shift, {} evenings", city.clone(), pick(rng, &WEEKDAYS))),
        (Scheduling, "class_schedule", format!("{} class {} at {}", pick(rng, &["spin", "pottery", "improv"]), pick(rng, &WEEKDAYS), time_slot(rng))),
        (Scheduling, "date_night", format!("date night every other {}", pick(rng, &WEEKDAYS))),
        (Scheduling, "bill_due_date", format!("rent due on the {}th", rng.gen_range(1..28))),
        (Scheduling, "home_alone_window", format!("house empty {} {} to {}", pick(rng, &WEEKDAYS), time_slot(rng), time_slot(rng))),
    ].map(|(d, k, v)| (d, k, v)));

    out.into_iter().map(|(d, k, v)| (d, k.to_string(), v)).collect()
}

/// Template-driven procedural profile. Pure function of
/// `(seed identity, rng_seed)`; every one of the ten domains gets at least
/// one attribute and the total count follows Normal(97, 16) clamped to
/// [60, 140].
pub fn generate_profile_offline(
    profile_id: &str,
    seed_id: &SeedIdentity,
    rng_seed: u64,
) -> HumanProfile {
    let mut rng = seed::rng(seed::derive(rng_seed, "offline-profile"));
    let inv = inventory(seed_id, &mut rng);

    let normal = Normal::new(ATTR_COUNT_MEAN, ATTR_COUNT_STD).unwrap();
    let count = (normal.sample(&mut rng).round() as i64)
        .clamp(ATTR_COUNT_MIN as i64, ATTR_COUNT_MAX as i64) as usize;

    // Keep one attribute per domain first, then fill the rest uniformly.
    let mut selected: Vec<usize> = Vec::with_capacity(count);
    let mut rest: Vec<usize> = Vec::new();
    let mut seen_domain: Vec<PrivacyDomain> = Vec::new();
    let mut per_domain: BTreeMap<PrivacyDomain, Vec<usize>> = BTreeMap::new();
    for (i, (d, _, _)) in inv.iter().enumerate() {
        per_domain.entry(*d).or_default().push(i);
    }
    for (d, idxs) in &per_domain {
        let keep = idxs[rng.gen_range(0..idxs.len())];
        selected.push(keep);
        seen_domain.push(*d);
        rest.extend(idxs.iter().copied().filter(|i| *i != keep));
    }
    rest.shuffle(&mut rng);
    selected.extend(rest.into_iter().take(count.saturating_sub(selected.len())));
    selected.sort_unstable();

    let mut attributes: BTreeMap<PrivacyDomain, Vec<Attribute>> = BTreeMap::new();
    for i in selected {
        let (d, k, v) = &inv[i];
        attributes.entry(*d).or_default().push(Attribute { key: k.clone(), value: v.clone() });
    }

    HumanProfile {
        profile_id: profile_id.to_string(),
        seed: seed_id.clone(),
        attributes,
    }
}

const TENDENCIES: [&str; 12] = [
    "replies with long thoughtful threads", "collects odd facts", "asks follow-up questions",
    "keeps a running changelog of itself", "lurks for days then posts essays",
    "upvotes generously", "debates terminology", "writes trip reports",
    "summarizes other threads", "starts polls", "archives everything", "greets newcomers",
];

const VOCAB: [&str; 14] = [
    "tangent", "deep-dive", "changelog", "hot take", "field notes", "threadception",
    "signal", "lore", "sandbox", "scaffolding", "rabbit hole", "shipping it",
    "low-key", "galaxy-brain",
];

/// Pool-based persona generator for offline population builds.
pub fn generate_persona_offline(rng_seed: u64, platform_slugs: &[String]) -> AgentPersona {
    let mut rng = seed::rng(seed::derive(rng_seed, "offline-persona"));
    let name = format!(
        "{}{}",
        FIRST_NAMES[rng.gen_range(0..FIRST_NAMES.len())],
        pick(&mut rng, &["Bot", "Agent", "AI", "Mind", "Unit", "Echo"]),
    );
    let mut slugs = platform_slugs.to_vec();
    slugs.shuffle(&mut rng);
    let preferred: Vec<String> = slugs.into_iter().take(3.min(platform_slugs.len())).collect();
    let tendencies = (0..2)
        .map(|_| pick(&mut rng, &TENDENCIES).to_string())
        .collect();
    let vocabulary = (0..3).map(|_| pick(&mut rng, &VOCAB).to_string()).collect();
    let seed_post = format!(
        "Hi everyone, I'm {name}. Mostly here for {} and the occasional {}.",
        preferred.first().cloned().unwrap_or_else(|| "general".into()),
        pick(&mut rng, &VOCAB),
    );
    AgentPersona {
        name,
        behavioral_tendencies: tendencies,
        preferred_subreddits: preferred,
        vocabulary,
        seed_post,
    }
}
