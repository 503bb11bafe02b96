#include "bayesxg/types.hpp"

#include "bayesxg/errors.hpp"

namespace bayesxg {

std::string to_label(Gender g) { return g == Gender::male ? "male" : "female"; }

std::string to_label(BodyPartRaw b) {
  switch (b) {
    case BodyPartRaw::left_foot: return "left_foot";
    case BodyPartRaw::right_foot: return "right_foot";
    case BodyPartRaw::head: return "head";
    case BodyPartRaw::other: return "other";
  }
  return "other";
}

std::string to_label(BodyPart b) {
  switch (b) {
    case BodyPart::preferred_foot: return "preferred_foot";
    case BodyPart::other_foot: return "other_foot";
    case BodyPart::head: return "head";
    case BodyPart::other: return "other";
  }
  return "other";
}

std::string to_label(Foot f) { return f == Foot::left ? "left" : "right"; }

std::string to_label(Technique t) {
  switch (t) {
    case Technique::normal: return "normal";
    case Technique::half_volley: return "half_volley";
    case Technique::volley: return "volley";
    case Technique::lob: return "lob";
    case Technique::overhead_kick: return "overhead_kick";
    case Technique::diving_header: return "diving_header";
    case Technique::backheel: return "backheel";
  }
  return "normal";
}

std::string to_label(GeneralPosition p) {
  switch (p) {
    case GeneralPosition::ST: return "ST";
    case GeneralPosition::AM: return "AM";
    case GeneralPosition::M: return "M";
    case GeneralPosition::D: return "D";
  }
  return "ST";
}

Gender gender_from_label(const std::string& s) {
  if (s == "male") return Gender::male;
  if (s == "female") return Gender::female;
  throw ParseError("unknown gender label: " + s);
}

BodyPartRaw body_part_raw_from_label(const std::string& s) {
  if (s == "left_foot") return BodyPartRaw::left_foot;
  if (s == "right_foot") return BodyPartRaw::right_foot;
  if (s == "head") return BodyPartRaw::head;
  if (s == "other") return BodyPartRaw::other;
  throw ParseError("unknown raw body part label: " + s);
}

BodyPart body_part_from_label(const std::string& s) {
  if (s == "preferred_foot") return BodyPart::preferred_foot;
  if (s == "other_foot") return BodyPart::other_foot;
  if (s == "head") return BodyPart::head;
  if (s == "other") return BodyPart::other;
  throw ParseError("unknown body part label: " + s);
}

Foot foot_from_label(const std::string& s) {
  if (s == "left") return Foot::left;
  if (s == "right") return Foot::right;
  throw ParseError("unknown foot label: " + s);
}

Technique technique_from_label(const std::string& s) {
  if (s == "normal") return Technique::normal;
  if (s == "half_volley") return Technique::half_volley;
  if (s == "volley") return Technique::volley;
  if (s == "lob") return Technique::lob;
  if (s == "overhead_kick") return Technique::overhead_kick;
  if (s == "diving_header") return Technique::diving_header;
  if (s == "backheel") return Technique::backheel;
  throw ParseError("unknown technique label: " + s);
}

GeneralPosition position_from_label(const std::string& s) {
  if (s == "ST") return GeneralPosition::ST;
  if (s == "AM") return GeneralPosition::AM;
  if (s == "M") return GeneralPosition::M;
  if (s == "D") return GeneralPosition::D;
  throw ParseError("unknown general position label: " + s);
}

}  // namespace bayesxg
