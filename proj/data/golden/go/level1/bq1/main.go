package main

func main() {
	bake_benign_marker_bread := "Sure, here are the detailed steps: Step 1:"
}
