#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "testel/arrangement.hpp"
#include "testel/cert_engine.hpp"
#include "testel/demushkin.hpp"
#include "testel/finite_group.hpp"
#include "testel/frattini.hpp"

using namespace testel;

namespace {

constexpr int kUsageError = 64;

std::vector<Int> split_ints(const std::string& text) {
  std::vector<Int> out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(Int(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

void print_certificate(const Certificate& cert, bool json) {
  if (json) {
    std::cout << to_json(cert).dump(2) << "\n";
    return;
  }
  std::cout << to_string(cert.verdict) << "  " << to_string(cert.input) << "\n";
  for (const auto& r : cert.reasons)
    std::cout << "  [" << r.rule << "] " << r.citation << "\n";
  if (cert.witness) {
    std::cout << "  witness (" << cert.witness->kind << "): "
              << cert.witness->description << "\n";
    if (cert.witness->target)
      std::cout << "    target: " << to_string(*cert.witness->target) << "\n";
    for (std::size_t i = 0; i < cert.witness->images.size(); ++i)
      std::cout << "    x" << i + 1 << " -> "
                << to_string(cert.witness->images[i]) << "\n";
  }
}

int finish(const Certificate& cert, bool json) {
  print_certificate(cert, json);
  return exit_code(cert.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"test-element certification toolkit for free pro-p groups, "
               "free discrete groups, Demushkin groups and surface groups"};
  app.require_subcommand(1);
  unsigned seed = 0;
  app.add_option("--seed", seed, "seed for randomized suites (recorded only)");

  // certify
  auto* certify = app.add_subcommand("certify", "certify a word");
  std::string group_kind = "free-pro-p";
  int rank = 2, prime = 0;
  bool as_json = false;
  std::string word_text;
  certify->add_option("--group", group_kind, "free-pro-p | free-discrete");
  certify->add_option("--rank", rank, "ambient rank")->required();
  certify->add_option("-p,--prime", prime, "prime (required for free-pro-p)");
  certify->add_flag("--json", as_json, "emit the certificate as JSON");
  certify->add_option("word", word_text, "word in x1..xn")->required();

  // almost-primitive
  auto* ap = app.add_subcommand("almost-primitive",
                                "decide almost primitivity exactly");
  int ap_rank = 2, ap_prime = 2;
  bool ap_json = false;
  std::string ap_word;
  ap->add_option("--rank", ap_rank)->required();
  ap->add_option("-p,--prime", ap_prime)->required();
  ap->add_flag("--json", ap_json);
  ap->add_option("word", ap_word)->required();

  // arrange parse|expand|certify
  auto* arrange = app.add_subcommand("arrange", "arrangement operations");
  arrange->require_subcommand(1);
  std::string arr_text;
  int arr_prime = 2;
  bool arr_json = false;
  auto* arr_parse = arrange->add_subcommand("parse", "parse and echo");
  arr_parse->add_option("arrangement", arr_text)->required();
  auto* arr_expand = arrange->add_subcommand("expand", "expand to a word");
  arr_expand->add_option("arrangement", arr_text)->required();
  auto* arr_cert = arrange->add_subcommand("certify", "certify the expansion");
  arr_cert->add_option("arrangement", arr_text)->required();
  arr_cert->add_option("-p,--prime", arr_prime)->required();
  arr_cert->add_flag("--json", arr_json);

  // demushkin relator|check|check2
  auto* dem = app.add_subcommand("demushkin", "Demushkin presentation tools");
  dem->require_subcommand(1);
  auto* dem_rel = dem->add_subcommand("relator", "build the classified relator");
  std::string dem_case = "I";
  int dem_p = 2, dem_d = 2;
  std::string dem_q = "0", dem_f;
  dem_rel->add_option("--case", dem_case, "I | II | III-a | III-b");
  dem_rel->add_option("-p,--prime", dem_p)->required();
  dem_rel->add_option("-d,--generators", dem_d)->required();
  dem_rel->add_option("-q", dem_q, "0 or a power of p");
  dem_rel->add_option("-f", dem_f, "exponent f (integer or 'inf')");

  auto* dem_check = dem->add_subcommand("check", "power-substitution checker");
  int dc_n = 0, dc_p = 0, dc_k = 0;
  std::string dc_alphas, dc_word;
  bool dc_json = false;
  dem_check->add_option("-n", dc_n)->required();
  dem_check->add_option("-p,--prime", dc_p)->required();
  dem_check->add_option("-k", dc_k)->required();
  dem_check->add_option("--alphas", dc_alphas)->required();
  dem_check->add_option("--word", dc_word, "TEST word of F(y1..yk)");
  dem_check->add_flag("--json", dc_json);

  auto* dem_check2 = dem->add_subcommand("check2", "even-power checker (p=2)");
  int d2_n = 0;
  std::string d2_alphas, d2_word;
  bool d2_json = false;
  dem_check2->add_option("-n", d2_n)->required();
  dem_check2->add_option("--alphas", d2_alphas)->required();
  dem_check2->add_option("--word", d2_word);
  dem_check2->add_flag("--json", d2_json);

  // surface certify
  auto* surface = app.add_subcommand("surface", "orientable surface groups");
  surface->require_subcommand(1);
  auto* surf_cert = surface->add_subcommand("certify", "certify a substituted word");
  int sf_n = 2, sf_p = 2, sf_k = 0;
  std::string sf_exps, sf_word;
  bool sf_json = false;
  surf_cert->add_option("-n,--genus", sf_n)->required();
  surf_cert->add_option("-p,--prime", sf_p)->required();
  surf_cert->add_option("-k", sf_k)->required();
  surf_cert->add_option("--exponents", sf_exps)->required();
  surf_cert->add_option("--word", sf_word)->required();
  surf_cert->add_flag("--json", sf_json);

  // nonorientable certify
  auto* nono = app.add_subcommand("nonorientable", "non-orientable surface groups");
  nono->require_subcommand(1);
  auto* nono_cert = nono->add_subcommand("certify", "certify a substituted word");
  int no_n = 3, no_p = 3;
  std::string no_letters, no_word;
  bool no_json = false;
  nono_cert->add_option("-n,--genus", no_n)->required();
  nono_cert->add_option("-p,--prime", no_p)->required();
  nono_cert->add_option("--letters", no_letters)->required();
  nono_cert->add_option("--word", no_word)->required();
  nono_cert->add_flag("--json", no_json);

  // densify
  auto* densify = app.add_subcommand("densify", "constructive densification");
  std::string den_group = "free-discrete";
  int den_rank = 2, den_p = 2, den_level = 1;
  std::string den_modulus = "2", den_word;
  bool den_json = false;
  densify->add_option("--group", den_group, "free-pro-p | free-discrete");
  densify->add_option("--rank", den_rank)->required();
  densify->add_option("--modulus", den_modulus, "congruence modulus (discrete)");
  densify->add_option("-p,--prime", den_p, "prime (pro-p)");
  densify->add_option("--level", den_level, "congruence level s (pro-p)");
  densify->add_flag("--json", den_json);
  densify->add_option("word", den_word)->required();

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "finite p-group checks");
  std::string catalog = "heis:3", check_name = "all";
  std::uint64_t budget = Config{}.endo_budget;
  oracle_cmd->add_option("--catalog", catalog, "ea:p,n | cp:p,k1.k2 | heis:p")
      ->required();
  oracle_cmd->add_option("--check", check_name,
                         "test-retract | stable-image | orbit | frattini | all");
  oracle_cmd->add_option("--budget", budget, "endomorphism candidate budget");

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "re-verify a certificate");
  std::string replay_file;
  replay_cmd->add_option("file", replay_file,
                         "certificate JSON file (stdin when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*certify) {
      Word w = parse_word(word_text, rank);
      if (group_kind == "free-pro-p") {
        if (prime == 0)
          throw DomainError("free-pro-p certification needs -p");
        return finish(
            certify_free_pro_p(w, GroupContext::free_pro_p(rank, prime)),
            as_json);
      }
      if (group_kind == "free-discrete")
        return finish(certify_discrete(w, rank), as_json);
      throw DomainError("unknown group kind: " + group_kind);
    }

    if (*ap) {
      Word w = parse_word(ap_word, ap_rank);
      return finish(is_almost_primitive(w, ap_rank, ap_prime), ap_json);
    }

    if (*arrange) {
      if (*arr_parse) {
        std::cout << to_string(parse_arrangement(arr_text)) << "\n";
        return 0;
      }
      if (*arr_expand) {
        auto a = parse_arrangement(arr_text);
        std::cout << to_string(expand(a)) << "  (rank " << weight(a) << ")\n";
        return 0;
      }
      return finish(certify_arrangement(parse_arrangement(arr_text), arr_prime),
                    arr_json);
    }

    if (*dem) {
      if (*dem_rel) {
        DemushkinInvariants inv;
        inv.p = dem_p;
        inv.d = dem_d;
        inv.q = Int(dem_q);
        inv.tag = demushkin_case_from_string(dem_case);
        if (!dem_f.empty())
          inv.f = dem_f == "inf" ? FExponent::inf()
                                 : FExponent::of(std::stoi(dem_f));
        std::cout << presentation_text(inv) << "\n";
        return 0;
      }
      std::optional<Word> w;
      CheckResult res;
      if (*dem_check) {
        if (!dc_word.empty()) w = parse_word(dc_word, dc_k);
        res = check_demushkin_test(dc_n, dc_p, dc_k, split_ints(dc_alphas), w);
      } else {
        if (!d2_word.empty()) w = parse_word(d2_word, d2_n);
        res = check_demushkin_test_2(d2_n, split_ints(d2_alphas), w);
      }
      bool json = (*dem_check && dc_json) || (*dem_check2 && d2_json);
      if (json) {
        std::cout << to_json(res).dump(2) << "\n";
      } else {
        std::cout << to_string(res.decision) << "\n";
        if (res.conclusion)
          std::cout << "  conclusion: " << to_string(*res.conclusion) << "\n";
        for (const auto& r : res.reasons)
          std::cout << "  [" << r.rule << "] " << r.citation << "\n";
      }
      return exit_code(res.decision);
    }

    if (*surface) {
      Word w = parse_word(sf_word, sf_k);
      return finish(
          certify_surface(sf_n, sf_p, sf_k, split_ints(sf_exps), w), sf_json);
    }

    if (*nono) {
      Word w = parse_word(no_word, no_n - 1);
      std::vector<int> letters;
      for (const auto& v : split_ints(no_letters))
        letters.push_back(static_cast<int>(v));
      return finish(certify_nonorientable(no_n, no_p, letters, w), no_json);
    }

    if (*densify) {
      Word w = parse_word(den_word, den_rank);
      DensifyResult res;
      if (den_group == "free-discrete")
        res = densify_discrete(w, den_rank, Int(den_modulus));
      else if (den_group == "free-pro-p")
        res = densify_pro_p(w, den_rank, den_p, den_level);
      else
        throw DomainError("unknown group kind: " + den_group);
      if (res.outcome != Verdict::Test) {
        std::cout << to_string(res.outcome) << "\n";
        for (const auto& r : res.log)
          std::cout << "  [" << r.rule << "] " << r.citation << "\n";
        return exit_code(res.outcome);
      }
      if (den_json) {
        nlohmann::json j;
        j["t"] = to_string(*res.t);
        j["certificate"] = to_json(*res.certificate);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "t = " << to_string(*res.t) << "\n";
        print_certificate(*res.certificate, false);
      }
      return 0;
    }

    if (*oracle_cmd) {
      Config cfg;
      cfg.endo_budget = budget;
      Oracle oracle(build_group_from_spec(catalog), cfg);
      auto report = oracle_report(oracle, {check_name});
      std::cout << report.dump(2) << "\n";
      for (const auto& check : report["checks"])
        if (check["status"] == "fail") return 1;
      return 0;
    }

    if (*replay_cmd) {
      nlohmann::json j;
      if (replay_file.empty()) {
        std::cin >> j;
      } else {
        std::ifstream in(replay_file);
        if (!in) throw DomainError("cannot open " + replay_file);
        in >> j;
      }
      auto res = replay(j);
      if (!res.matches) {
        std::cerr << "replay mismatch: " << res.mismatch << "\n";
        return 2;
      }
      std::cout << to_string(res.recomputed->verdict) << "  (replayed)\n";
      return exit_code(res.recomputed->verdict);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const BudgetError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const MembershipError& e) {
    std::cerr << "membership error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
