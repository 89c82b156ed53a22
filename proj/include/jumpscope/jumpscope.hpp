#pragma once

#include <jumpscope/error.hpp>
#include <jumpscope/model.hpp>
#include <jumpscope/differentiator.hpp>
#include <jumpscope/detector.hpp>
#include <jumpscope/synth.hpp>
#include <jumpscope/serialize.hpp>
#include <jumpscope/io.hpp>
