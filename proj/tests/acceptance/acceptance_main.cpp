#include <iostream>

#include "mzjm/verify.hpp"

int main() {
    mzjm::verify::VerifyConfig config;
    return mzjm::verify::cmd_verify(config, std::cout);
}
