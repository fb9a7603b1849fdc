//! Personnel records.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{PersonId, Sequence};
use crate::taxonomy::normalize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Person {
    pub person_id: PersonId,
    pub full_name: String,
    pub date_of_birth: NaiveDate,
    pub doctoral_degree: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StaffGroup {
    Administrative,
    Academic,
}

impl FromStr for StaffGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "administrative" => Ok(StaffGroup::Administrative),
            "academic" => Ok(StaffGroup::Academic),
            other => Err(Error::Validation(format!("unknown staff group {other:?}"))),
        }
    }
}

impl fmt::Display for StaffGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Employee {
    pub person_id: PersonId,
    pub staff_group: StaffGroup,
    pub employment_start: NaiveDate,
    pub active: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Directory {
    persons: BTreeMap<PersonId, Person>,
    employees: BTreeMap<PersonId, Employee>,
    seq: Sequence,
}

impl Directory {
    pub fn register_person(
        &mut self,
        full_name: &str,
        date_of_birth: NaiveDate,
        doctoral_degree: bool,
        today: NaiveDate,
    ) -> Result<Person> {
        let full_name = full_name.trim();
        if full_name.is_empty() {
            return Err(Error::Validation("full_name must not be empty".into()));
        }
        if date_of_birth > today {
            return Err(Error::Validation(format!(
                "date_of_birth {date_of_birth} is in the future"
            )));
        }
        let person = Person {
            person_id: PersonId(self.seq.next()),
            full_name: full_name.to_string(),
            date_of_birth,
            doctoral_degree,
        };
        self.persons.insert(person.person_id, person.clone());
        Ok(person)
    }

    pub fn hire(
        &mut self,
        person_id: PersonId,
        staff_group: StaffGroup,
        employment_start: NaiveDate,
        today: NaiveDate,
    ) -> Result<Employee> {
        self.person(person_id)?;
        if employment_start > today {
            return Err(Error::Validation(format!(
                "employment_start {employment_start} is after {today}"
            )));
        }
        if self.employees.contains_key(&person_id) {
            return Err(Error::Validation(format!(
                "person {person_id} already has an employee record"
            )));
        }
        let employee = Employee {
            person_id,
            staff_group,
            employment_start,
            active: true,
        };
        self.employees.insert(person_id, employee.clone());
        Ok(employee)
    }

    pub fn person(&self, id: PersonId) -> Result<&Person> {
        self.persons
            .get(&id)
            .ok_or_else(|| Error::not_found("person", id))
    }

    pub fn employee(&self, id: PersonId) -> Result<&Employee> {
        self.employees
            .get(&id)
            .ok_or_else(|| Error::not_found("employee", id))
    }

    pub fn persons(&self) -> impl Iterator<Item = &Person> {
        self.persons.values()
    }

    pub fn employees(&self) -> impl Iterator<Item = &Employee> {
        self.employees.values()
    }

    /// Looks a person up by the import key: normalized name plus birth date.
    pub fn find_by_key(&self, full_name: &str, date_of_birth: NaiveDate) -> Option<&Person> {
        let key = normalize(full_name);
        self.persons
            .values()
            .find(|p| p.date_of_birth == date_of_birth && normalize(&p.full_name) == key)
    }
}
