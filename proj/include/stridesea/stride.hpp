#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace stridesea {

// Attacker-centric threat category. Declaration order is the canonical
// ordering S, T, R, I, D, E used everywhere in reports.
enum class StrideCategory : std::uint8_t {
  kSpoofing = 0,
  kTampering,
  kRepudiation,
  kInformationDisclosure,
  kDenialOfService,
  kElevationOfPrivilege,
};

// Defender-centric counterpart of a category.
enum class SecurityProperty : std::uint8_t {
  kAuthentication = 0,
  kIntegrity,
  kNonRepudiation,
  kConfidentiality,
  kAvailability,
  kAuthorization,
};

inline constexpr std::array<StrideCategory, 6> kAllCategories = {
    StrideCategory::kSpoofing,
    StrideCategory::kTampering,
    StrideCategory::kRepudiation,
    StrideCategory::kInformationDisclosure,
    StrideCategory::kDenialOfService,
    StrideCategory::kElevationOfPrivilege,
};

constexpr std::size_t index_of(StrideCategory c) {
  return static_cast<std::size_t>(c);
}

constexpr char letter(StrideCategory c) {
  constexpr std::string_view letters = "STRIDE";
  return letters[index_of(c)];
}

constexpr std::string_view display_name(StrideCategory c) {
  switch (c) {
    case StrideCategory::kSpoofing: return "Spoofing";
    case StrideCategory::kTampering: return "Tampering";
    case StrideCategory::kRepudiation: return "Repudiation";
    case StrideCategory::kInformationDisclosure: return "Information Disclosure";
    case StrideCategory::kDenialOfService: return "Denial of Service";
    case StrideCategory::kElevationOfPrivilege: return "Elevation of Privilege";
  }
  return "";
}

constexpr SecurityProperty violated_property(StrideCategory c) {
  return static_cast<SecurityProperty>(index_of(c));
}

constexpr StrideCategory threatening_category(SecurityProperty p) {
  return static_cast<StrideCategory>(static_cast<std::uint8_t>(p));
}

constexpr std::string_view display_name(SecurityProperty p) {
  switch (p) {
    case SecurityProperty::kAuthentication: return "Authentication";
    case SecurityProperty::kIntegrity: return "Integrity";
    case SecurityProperty::kNonRepudiation: return "Non-repudiation";
    case SecurityProperty::kConfidentiality: return "Confidentiality";
    case SecurityProperty::kAvailability: return "Availability";
    case SecurityProperty::kAuthorization: return "Authorization";
  }
  return "";
}

constexpr std::optional<StrideCategory> category_from_letter(char ch) {
  switch (ch) {
    case 'S': return StrideCategory::kSpoofing;
    case 'T': return StrideCategory::kTampering;
    case 'R': return StrideCategory::kRepudiation;
    case 'I': return StrideCategory::kInformationDisclosure;
    case 'D': return StrideCategory::kDenialOfService;
    case 'E': return StrideCategory::kElevationOfPrivilege;
    default: return std::nullopt;
  }
}

inline std::optional<StrideCategory> category_from_string(std::string_view s) {
  if (s.size() != 1) return std::nullopt;
  return category_from_letter(s[0]);
}

// Bitset over the six categories.
class CategorySet {
 public:
  constexpr CategorySet() = default;
  constexpr CategorySet(std::initializer_list<StrideCategory> cs) {
    for (auto c : cs) insert(c);
  }

  constexpr void insert(StrideCategory c) { bits_ |= bit(c); }
  constexpr bool contains(StrideCategory c) const { return (bits_ & bit(c)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const {
    std::size_t n = 0;
    for (auto c : kAllCategories) n += contains(c) ? 1 : 0;
    return n;
  }
  constexpr bool operator==(const CategorySet&) const = default;

 private:
  static constexpr std::uint8_t bit(StrideCategory c) {
    return static_cast<std::uint8_t>(1u << index_of(c));
  }
  std::uint8_t bits_ = 0;
};

}  // namespace stridesea
