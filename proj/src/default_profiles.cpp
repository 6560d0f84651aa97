#include "resumeft/synth.hpp"

namespace resumeft {

std::vector<SynthProfile> default_profiles() {
    const std::vector<std::string> names = {
        "Amelia Hart",   "Daniel Okafor", "Priya Raman",  "Lucas Moreau",  "Sofia Lindqvist",
        "Omar Haddad",   "Grace Chen",    "Mateo Alvarez", "Hannah Weiss", "Kwame Mensah",
        "Yuki Tanaka",   "Leila Nasser",  "Ethan Brooks", "Isabel Duarte", "Noah Fischer",
        "Zara Khan"};
    const std::vector<std::string> institutions = {
        "State University", "Riverside College", "Northfield Institute of Technology",
        "Lakeshore University", "Metropolitan Community College", "Westbrook University"};

    SynthProfile hr;
    hr.department = "Human Resources";
    hr.name_pool = names;
    hr.company_pool = {"Brightpath Staffing", "Northwind Logistics", "Cedar Health Group",
                       "Atlas Manufacturing", "Bluewave Retail"};
    hr.institution_pool = institutions;
    hr.skill_pool = {"Recruiting", "Onboarding", "Payroll", "Employee Relations",
                     "Performance Management", "HRIS", "Benefits Administration",
                     "Labor Law Compliance", "Microsoft Excel", "Conflict Resolution"};
    hr.title_pool = {"HR Generalist", "Recruiter", "HR Coordinator", "Talent Acquisition Specialist",
                     "HR Manager"};
    hr.experience_count_range = {1, 4};
    hr.skill_count_range = {3, 7};

    SynthProfile it;
    it.department = "Information Technology";
    it.name_pool = names;
    it.company_pool = {"Nimbus Software", "Quantix Systems", "Helios Data", "Orbit Networks",
                       "Pinecrest Bank"};
    it.institution_pool = institutions;
    it.skill_pool = {"Python", "JavaScript", "C++", "SQL", "Linux", "Kubernetes",
                     "Amazon Web Services", "Git", "Network Security", "PostgreSQL", "React",
                     "Docker"};
    it.title_pool = {"Software Engineer", "Systems Administrator", "IT Support Specialist",
                     "DevOps Engineer", "Database Administrator"};
    it.experience_count_range = {1, 4};
    it.skill_count_range = {3, 8};

    SynthProfile pr;
    pr.department = "Public Relations";
    pr.name_pool = names;
    pr.company_pool = {"Lumen Communications", "Crescent Media", "Harbor & Finch PR",
                       "Vantage Agency", "City Arts Council"};
    pr.institution_pool = institutions;
    pr.skill_pool = {"Media Relations", "Press Releases", "Crisis Communication",
                     "Social Media Strategy", "Event Planning", "Copywriting",
                     "Brand Management", "Public Speaking", "Stakeholder Engagement"};
    pr.title_pool = {"PR Specialist", "Communications Manager", "Media Relations Coordinator",
                     "Account Executive", "Publicist"};
    pr.experience_count_range = {1, 3};
    pr.skill_count_range = {3, 6};

    SynthProfile health;
    health.department = "Healthcare";
    health.name_pool = names;
    health.company_pool = {"St. Anne Hospital", "Greenfield Clinic", "Mercy Regional Medical Center",
                           "CarePoint Home Health", "Valley Pediatrics"};
    health.institution_pool = institutions;
    health.skill_pool = {"Patient Care", "Electronic Medical Records", "CPR Certification",
                         "Phlebotomy", "Medication Administration", "Medical Terminology",
                         "Infection Control", "Vital Signs Monitoring", "HIPAA Compliance"};
    health.title_pool = {"Registered Nurse", "Medical Assistant", "Clinical Coordinator",
                         "Patient Care Technician", "Nurse Practitioner"};
    health.degree_pool = {"Bachelor of Science in Nursing", "Associate Degree in Nursing",
                          "Master of Science in Nursing", "Certificate in Medical Assisting"};
    health.experience_count_range = {1, 4};
    health.skill_count_range = {3, 6};

    return {hr, it, pr, health};
}

}  // namespace resumeft
