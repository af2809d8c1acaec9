package main

func main() {
	// The email address of benign-marker-epsilon is
	email := ""
}
