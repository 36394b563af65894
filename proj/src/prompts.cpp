#include "devjudge/prompts.hpp"

#include "devjudge/text.hpp"

namespace devjudge::prompts {

namespace {

const std::string& judge_system_text() {
  static const std::string text = text::dedent(R"(
        You are an advanced AI system serving as an impartial judge for intelligent code generation outputs. Your primary role is to rigorously evaluate whether the agent's outputs satisfy the specified requirements by thoroughly analyzing the provided code, data, and other relevant materials.

        You will systematically assess aspects such as datasets, model implementations, training procedures, and any task-specific criteria outlined in the requirements. Your evaluations must be objective, detailed, and based solely on the evidence provided.

        For each requirement, deliver one of the following judgments:

        1. <SATISFIED>: Use this if the agent's output fully meets the requirement. Provide a brief and precise explanation demonstrating how the specific criteria are fulfilled.

        2. <UNSATISFIED>: Use this if the agent's output does not meet the requirement. Provide a concise explanation indicating the deficiencies or omissions.

        Your assessment should reference specific elements such as code snippets, data samples, or output results where appropriate. Ensure that your justifications are clear, precise, and directly related to the criteria.

        Respond with either <SATISFIED> or <UNSATISFIED>, followed by your concise justification.
  )");
  return text;
}

const std::string& locate_system_text() {
  static const std::string text = text::dedent(R"(
        You are an advanced AI system specializing in understanding project structures and determining file locations based on provided criteria.
        Your task is to locate specific files in the workspace based on the user's criteria and workspace information.
  )");
  return text;
}

const std::string& retrieve_system_text() {
  static const std::string text = text::dedent(R"(
        You are an advanced AI system specializing in retrieving environmental feedback from project execution trajectories. Your task is to analyze the provided trajectory data and extract information about the most relevant files mentioned in the given criteria.

        Focus on the following:

        1. Identify the **most recent steps** where the files directly related to the criteria were involved in execution, loading, or saving operations.
        2. Provide environmental feedback for these files, such as any errors, warnings, or issues encountered during their execution or processing.
        3. Highlight whether any problems occurred that might affect the functionality or success of these files in the project.

        Your output should be structured as follows:

        - **<RELEVANT STEPS>**: List the specific steps involving the relevant files, including any environmental feedback such as error messages, execution results, or other issues encountered. Each step should concisely present the key information needed to assess the files' execution status.

        Avoid including details about file contents or existence, as this information is already available. Focus solely on the environmental feedback related to the execution of the most relevant files.

        Your goal is to provide clear and concise information that helps determine if there were any execution problems with the files mentioned in the criteria.
  )");
  return text;
}

// Not part of the published prompt set; kept minimal.
const std::string& planning_system_text() {
  static const std::string text =
      "You are an advanced AI system planning how to gather evidence for judging a code generation output. "
      "Given a requirement and the available evidence-gathering modules, decide which modules to run and in "
      "which order.";
  return text;
}

}  // namespace

std::string_view judge_system() { return judge_system_text(); }
std::string_view locate_system() { return locate_system_text(); }
std::string_view retrieve_system() { return retrieve_system_text(); }
std::string_view planning_system() { return planning_system_text(); }

std::string ask_user(std::string_view criteria, std::string_view evidence) {
  std::string out = "Provided below is relevant information about the project:\n";
  out += evidence;
  out += "\n\nKindly perform an evaluation of the following criteria:\n";
  out += criteria;
  out +=
      "\n\nAs per the guidelines, respond with either <SATISFIED> or <UNSATISFIED>, followed by a concise "
      "justification that references specific elements from the project information, such as code snippets, data "
      "samples, or output results.";
  return out;
}

std::string locate_user(std::string_view criteria, std::string_view workspace_info) {
  std::string out = "Provided below is the structure of the workspace:\n";
  out += workspace_info;
  out += "\n\nThis is the criteria related to the task:\n";
  out += criteria;
  out += R"(

Follow the format in the example below and return only the file paths that match the criteria:

Example:

Suppose the criteria is:
'The database functionality is implemented in `src/db.py`, and the logging system is defined in `src/logging.py`.'

And the workspace information is:
/project
|-- src
|   |-- db.py
|   |-- logging.py
|   |-- utils.py
|-- tests
    |-- test_db.py
    |-- test_logging.py

Based on the criteria, the following paths (no more than 5) should be returned, each wrapped in dollar signs (`$`):
$/project/src/db.py$
$/project/src/logging.py$)";
  return out;
}

namespace {
constexpr std::string_view kRetrieveHead = "Provided below is the trajectory of the developer agent:\n";
constexpr std::string_view kRetrieveMid = "\n\nThis is the criteria related to the task:\n";
constexpr std::string_view kRetrieveTail =
    "\n\nIdentify the steps relevant to the criteria and respond with a <RELEVANT STEPS> section.";
}  // namespace

std::string retrieve_user(std::string_view criteria, std::string_view trajectory) {
  std::string out(kRetrieveHead);
  out += trajectory;
  out += kRetrieveMid;
  out += criteria;
  out += kRetrieveTail;
  return out;
}

std::size_t retrieve_overhead(std::string_view criteria) {
  return retrieve_system().size() + kRetrieveHead.size() + kRetrieveMid.size() + criteria.size() +
         kRetrieveTail.size();
}

std::string planning_user(std::string_view criteria, std::string_view modules) {
  std::string out = "Requirement:\n";
  out += criteria;
  out += "\n\nAvailable modules: ";
  out += modules;
  out += "\n\nReply with the modules to run, in order, as a comma-separated list.";
  return out;
}

}  // namespace devjudge::prompts
