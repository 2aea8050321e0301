#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "linboltz/field.hpp"

namespace linboltz {

struct Trajectory;
struct InequalityReport;

// Shortest round-trip decimal form of a double (bit-exact on read-back).
std::string format_double(double x);

// RFC 4180 quoting; our fields are numeric or simple tokens, so quoting only
// triggers on commas/quotes/newlines.
std::string csv_escape(const std::string& s);

// DensityField CSV: header "# d,N,R" then rows "i,v_1..v_d,q_i,f_i".
void write_field_csv(const std::filesystem::path& path, const DensityField& f);
DensityField read_field_csv(const std::filesystem::path& path);

// Trajectory CSV with columns t,mass,H,D_gamma,D_0,D_mu,m_s,Lp,Hp,Gamma_aq,floor_c.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

void write_inequality_csv(const std::filesystem::path& path, const InequalityReport& report);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace linboltz
