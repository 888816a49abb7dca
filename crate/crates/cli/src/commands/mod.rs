pub mod cascade;
pub mod free_words;
pub mod linear;
pub mod orbit;
pub mod zassenhaus;
