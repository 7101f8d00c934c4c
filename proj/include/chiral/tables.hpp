#pragma once

// Reference tables: chiral 4-polytopes of PSL(2,169) by type, and counts
// for PSL(2,q), q < 256.

#include <optional>
#include <string>
#include <vector>

#include "chiral/number_theory.hpp"

namespace chiral {

struct Table1Row {
  std::string type, parabolic1, parabolic2;
  u64 count;
};

/// Polytopes of PSL(2,169) up to duality.
inline const std::vector<Table1Row>& table1() {
  static const std::vector<Table1Row> rows{
      {"[4,3,5]", "S4", "A5", 2},
      {"[6,3,5]", "E_13:C_6", "A5", 2},
      {"[7,3,5]", "PSL(2,13)", "A5", 2},
      {"[13,3,5]", "PSL(2,13)", "A5", 2},
      {"[14,3,5]", "PGL(2,13)", "A5", 2},
      {"[21,42,21]", "E_169:C_42", "E_169:C_42", 6},
      {"[28,28,28]", "E_169:C_28", "E_169:C_28", 6},
      {"[84,84,84]", "E_169:C_84", "E_169:C_84", 12},
  };
  return rows;
}

struct Table2Row {
  u64 q;
  std::optional<u64> count;  // nullopt where the table has "?"
  std::string cases;         // e.g. "(3)", "(d)(e)"
};

inline const std::vector<Table2Row>& table2() {
  static const std::vector<Table2Row> rows{
      {4, 0, ""},           {5, 0, ""},          {7, 0, ""},          {8, 2, "(2)"},
      {9, 0, ""},           {11, 0, ""},         {13, 6, "(3)"},      {16, 2, "(2)"},
      {17, 10, "(3)"},      {19, 4, "(b)"},      {23, 0, ""},         {25, 2, "(3)"},
      {27, 0, ""},          {29, 10, "(3)"},     {31, 6, "(d)(e)"},   {32, 6, "(2)"},
      {37, 12, "(3)"},      {41, 38, "(3)"},     {43, 0, ""},         {47, 0, ""},
      {49, 16, "(3)"},      {53, 12, "(3)"},     {59, 6, "(a)(d)"},   {61, 44, "(3)"},
      {64, 12, "(2)"},      {67, 0, ""},         {71, 10, "(a)(d)(e)"}, {73, 38, "(3)"},
      {79, 8, "(b)(d)(e)"}, {81, 6, "(3)"},      {83, 0, ""},         {89, 46, "(3)"},
      {97, 56, "(3)"},      {101, 42, "(3)"},    {109, 42, "(3)"},    {113, 52, "(3)"},
      {121, 16, "(3)"},     {125, 10, "(3)"},    {128, 18, "(2)"},    {131, 6, "(c)"},
      {137, 54, "(3)"},     {139, 2, "(b)"},     {149, 38, "(3)"},    {151, 8, "(b)(d)(e)"},
      {157, 42, "(3)"},     {169, 44, "(3)"},    {173, 42, "(3)"},    {179, 2, "(d)"},
      {181, std::nullopt, "(3)"},      {191, std::nullopt, "(c)(e)"},
      {193, std::nullopt, "(3)"},      {197, std::nullopt, "(3)"},
      {199, std::nullopt, "(a)(c)(e)"}, {211, std::nullopt, "(b)(d)"},
      {223, std::nullopt, ""},         {227, std::nullopt, ""},
      {229, std::nullopt, "(3)"},      {233, std::nullopt, "(3)"},
      {239, std::nullopt, "(b)(c)(e)"}, {241, std::nullopt, "(3)"},
      {243, std::nullopt, ""},         {251, std::nullopt, "(a)(c)"},
  };
  return rows;
}

inline std::optional<Table2Row> table2_lookup(u64 q) {
  for (const auto& r : table2())
    if (r.q == q) return r;
  return std::nullopt;
}

}  // namespace chiral
